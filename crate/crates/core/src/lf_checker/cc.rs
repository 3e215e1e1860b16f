//! Ground congruence closure over pre-terms.
//!
//! Terms are interned into a dag keyed modulo α-equivalence; binder terms
//! (Π, λ) enter as opaque atoms, so the closure never reasons under a
//! binder. Application annotations are erased before interning: two
//! well-typed applications of equal functions to equal arguments are
//! judgmentally equal regardless of their annotations.

use crate::lf_syntax::PreTerm;
use std::collections::HashMap;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Head {
    SortBox,
    SortRep,
    Var(String),
    Sym(String),
    App,
    Eq,
    Refl,
    /// Binder term, kept whole and compared up to α.
    Opaque(PreTerm),
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Sig {
    head: Head,
    children: Vec<usize>, // class representatives
}

pub struct Cc {
    heads: Vec<Head>,
    children: Vec<Vec<usize>>, // child node ids (immutable)
    parent: Vec<usize>,
    by_sig: HashMap<Sig, usize>,
}

impl Cc {
    pub fn new() -> Self {
        Cc {
            heads: Vec::new(),
            children: Vec::new(),
            parent: Vec::new(),
            by_sig: HashMap::new(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn sig_of(&mut self, node: usize) -> Sig {
        let head = self.heads[node].clone();
        let children = self.children[node]
            .clone()
            .into_iter()
            .map(|c| self.find(c))
            .collect();
        Sig { head, children }
    }

    fn intern(&mut self, head: Head, children: Vec<usize>) -> usize {
        let sig = Sig {
            head: head.clone(),
            children: children.iter().map(|&c| self.find(c)).collect(),
        };
        if let Some(&n) = self.by_sig.get(&sig) {
            return self.find(n);
        }
        let id = self.heads.len();
        self.heads.push(head);
        self.children.push(children);
        self.parent.push(id);
        self.by_sig.insert(sig, id);
        id
    }

    /// Intern a term (annotations erased, binders opaque).
    pub fn add(&mut self, t: &PreTerm) -> usize {
        match t {
            PreTerm::SortBox => self.intern(Head::SortBox, vec![]),
            PreTerm::SortRep => self.intern(Head::SortRep, vec![]),
            PreTerm::Var(x) => self.intern(Head::Var(x.clone()), vec![]),
            PreTerm::Sym(f, args) => {
                let children = args.iter().map(|a| self.add(a)).collect();
                self.intern(Head::Sym(f.clone()), children)
            }
            PreTerm::App { fun, arg, .. } => {
                let f = self.add(fun);
                let a = self.add(arg);
                self.intern(Head::App, vec![f, a])
            }
            PreTerm::Eq(ty, l, r) => {
                let ty = self.add(ty);
                let l = self.add(l);
                let r = self.add(r);
                self.intern(Head::Eq, vec![ty, l, r])
            }
            PreTerm::Refl(a) => {
                let a = self.add(a);
                self.intern(Head::Refl, vec![a])
            }
            PreTerm::Pi(..) | PreTerm::Abs(..) => self.intern(Head::Opaque(t.clone()), vec![]),
        }
    }

    /// Merge the classes of two terms and restore congruence.
    pub fn merge(&mut self, a: &PreTerm, b: &PreTerm) {
        let a = self.add(a);
        let b = self.add(b);
        self.union(a, b);
        self.rebuild();
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    /// Naive congruence fixpoint: merge any two nodes whose heads and
    /// child classes agree, until nothing changes. Desk-scale inputs make
    /// the quadratic loop harmless.
    fn rebuild(&mut self) {
        loop {
            let mut changed = false;
            let mut seen: HashMap<Sig, usize> = HashMap::new();
            for node in 0..self.heads.len() {
                let sig = self.sig_of(node);
                match seen.get(&sig) {
                    Some(&other) => {
                        if self.find(other) != self.find(node) {
                            self.union(other, node);
                            changed = true;
                        }
                    }
                    None => {
                        seen.insert(sig, node);
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn same(&mut self, a: &PreTerm, b: &PreTerm) -> bool {
        let a = self.add(a);
        let b = self.add(b);
        // Interning may add nodes congruent to existing classes.
        self.rebuild();
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lf_syntax::parse_term;

    fn t(s: &str) -> PreTerm {
        parse_term(s).unwrap()
    }

    #[test]
    fn congruence_propagates() {
        let mut cc = Cc::new();
        cc.merge(&t("a"), &t("b"));
        assert!(cc.same(&t("f(a, c)"), &t("f(b, c)")));
        assert!(!cc.same(&t("f(a, c)"), &t("f(c, a)")));
    }

    #[test]
    fn transitivity_and_nested() {
        let mut cc = Cc::new();
        cc.merge(&t("a"), &t("b"));
        cc.merge(&t("b"), &t("c"));
        assert!(cc.same(&t("g(g(a))"), &t("g(g(c))")));
    }

    #[test]
    fn upward_merging() {
        let mut cc = Cc::new();
        let fa = t("f(a)");
        let b = t("b");
        cc.merge(&fa, &b);
        cc.merge(&t("a"), &t("a'"));
        // f(a') = f(a) = b by congruence
        assert!(cc.same(&t("f(a')"), &b));
    }

    #[test]
    fn binders_are_alpha_atoms() {
        let mut cc = Cc::new();
        assert!(cc.same(&t("\\(x : A). x"), &t("\\(y : A). y")));
        assert!(!cc.same(&t("\\(x : A). x"), &t("\\(x : A). a")));
    }
}
