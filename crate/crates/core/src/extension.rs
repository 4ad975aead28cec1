use std::fmt;

use crate::argset::{ArgId, ArgSet};
use crate::framework::Framework;

/// One stable extension, members sorted by argument index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Extension {
    members: Vec<ArgId>,
}

impl Extension {
    pub fn new(mut members: Vec<ArgId>) -> Self {
        members.sort_unstable();
        members.dedup();
        Extension { members }
    }

    pub fn from_set(set: &ArgSet) -> Self {
        Extension {
            members: set.to_vec(),
        }
    }

    pub fn members(&self) -> &[ArgId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: ArgId) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    pub fn to_set(&self, universe: usize) -> ArgSet {
        ArgSet::from_ids(universe, self.members.iter().copied())
    }

    /// `[name1,name2,...]` in index order.
    pub fn display<'a>(&'a self, framework: &'a Framework) -> impl fmt::Display + 'a {
        Named {
            ext: self,
            framework,
        }
    }

    pub fn names<'a>(&'a self, framework: &'a Framework) -> Vec<&'a str> {
        self.members.iter().map(|&x| framework.name(x)).collect()
    }
}

struct Named<'a> {
    ext: &'a Extension,
    framework: &'a Framework,
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, &x) in self.ext.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(self.framework.name(x))?;
        }
        f.write_str("]")
    }
}
