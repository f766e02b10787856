//! Runtime-typed machines: a `MachineSpec` may nest constructions to any
//! depth, so the CLI works over one enum that wraps every concrete machine.

use std::fmt;

use selfsim::constructions::{
    C2Elem, C2Extension, DirectProduct, EconomicalPower, LampElem, Lamplighter, Pair, Tuple,
};
use selfsim::{AddingMachine, DyadicMachine, Generator, Machine, Padic2, Result, Vect, ZOmegaMachine};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnyElem {
    Int(i64),
    Padic(Padic2),
    Vect(Vect),
    Pair(Box<Pair<AnyElem, AnyElem>>),
    Tuple(Tuple<AnyElem>),
    C2(C2Elem<AnyElem>),
    Lamp(Box<LampElem<AnyElem>>),
}

impl fmt::Display for AnyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyElem::Int(x) => write!(f, "{x}"),
            AnyElem::Padic(x) => write!(f, "{x}"),
            AnyElem::Vect(x) => write!(f, "{x}"),
            AnyElem::Pair(x) => write!(f, "{x}"),
            AnyElem::Tuple(x) => write!(f, "{x}"),
            AnyElem::C2(x) => write!(f, "{x}"),
            AnyElem::Lamp(x) => write!(f, "{x}"),
        }
    }
}

/// Conversion between a concrete element type and its `AnyElem` variant.
/// Elements only ever meet the machine they were built for, so a variant
/// mismatch is a programming error.
trait Variant: Sized {
    fn wrap(self) -> AnyElem;
    fn peel(e: &AnyElem) -> &Self;
}

macro_rules! variant {
    ($t:ty, $v:ident) => {
        variant!($t, $v, |x| x);
    };
    ($t:ty, $v:ident, $into:expr) => {
        impl Variant for $t {
            fn wrap(self) -> AnyElem {
                AnyElem::$v($into(self))
            }
            fn peel(e: &AnyElem) -> &Self {
                match e {
                    AnyElem::$v(x) => x,
                    other => panic!("element {other} does not belong to this machine"),
                }
            }
        }
    };
}

variant!(i64, Int);
variant!(Padic2, Padic);
variant!(Vect, Vect);
variant!(Tuple<AnyElem>, Tuple);
variant!(C2Elem<AnyElem>, C2);
variant!(Pair<AnyElem, AnyElem>, Pair, Box::new);
variant!(LampElem<AnyElem>, Lamp, Box::new);

pub enum Kind {
    Adding(AddingMachine),
    Dyadic(DyadicMachine),
    ZOmega(ZOmegaMachine),
    Product(Box<DirectProduct<AnyMachine, AnyMachine>>),
    Economical(Box<EconomicalPower<AnyMachine>>),
    C2(Box<C2Extension<AnyMachine>>),
    Lamplighter(Box<Lamplighter<AnyMachine>>),
}

macro_rules! each {
    ($kind:expr, $m:ident => $e:expr) => {
        match $kind {
            Kind::Adding($m) => $e,
            Kind::Dyadic($m) => $e,
            Kind::ZOmega($m) => $e,
            Kind::Product($m) => $e,
            Kind::Economical($m) => $e,
            Kind::C2($m) => $e,
            Kind::Lamplighter($m) => $e,
        }
    };
}

pub struct AnyMachine {
    kind: Kind,
    transversal: Vec<AnyElem>,
}

fn wrapped_transversal<M: Machine>(m: &M) -> Vec<AnyElem>
where
    M::Elem: Variant,
{
    m.transversal().iter().cloned().map(Variant::wrap).collect()
}

fn mul<M: Machine>(m: &M, a: &AnyElem, b: &AnyElem) -> AnyElem
where
    M::Elem: Variant,
{
    m.mul(Variant::peel(a), Variant::peel(b)).wrap()
}

fn inv<M: Machine>(m: &M, a: &AnyElem) -> AnyElem
where
    M::Elem: Variant,
{
    m.inv(Variant::peel(a)).wrap()
}

fn in_h<M: Machine>(m: &M, a: &AnyElem) -> Result<bool>
where
    M::Elem: Variant,
{
    m.in_h(Variant::peel(a))
}

fn apply_f<M: Machine>(m: &M, a: &AnyElem) -> Result<AnyElem>
where
    M::Elem: Variant,
{
    m.apply_f(Variant::peel(a)).map(Variant::wrap)
}

fn generators<M: Machine>(m: &M) -> Vec<Generator<AnyElem>>
where
    M::Elem: Variant,
{
    m.generators()
        .into_iter()
        .map(|g| Generator::new(g.name, g.elem.wrap()))
        .collect()
}

impl AnyMachine {
    pub fn new(kind: Kind) -> Self {
        let transversal = each!(&kind, m => wrapped_transversal(m.as_ref_machine()));
        AnyMachine { kind, transversal }
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }
}

/// Uniform access through the `Box` in the construction variants.
trait AsRefMachine {
    type M: Machine;
    fn as_ref_machine(&self) -> &Self::M;
}

impl<M: Machine> AsRefMachine for M {
    type M = M;
    fn as_ref_machine(&self) -> &M {
        self
    }
}

impl Machine for AnyMachine {
    type Elem = AnyElem;

    fn degree(&self) -> usize {
        each!(&self.kind, m => m.degree())
    }

    fn identity(&self) -> AnyElem {
        each!(&self.kind, m => m.identity().wrap())
    }

    fn mul(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        each!(&self.kind, m => mul(m.as_ref_machine(), a, b))
    }

    fn inv(&self, a: &AnyElem) -> AnyElem {
        each!(&self.kind, m => inv(m.as_ref_machine(), a))
    }

    fn transversal(&self) -> &[AnyElem] {
        &self.transversal
    }

    fn in_h(&self, g: &AnyElem) -> Result<bool> {
        each!(&self.kind, m => in_h(m.as_ref_machine(), g))
    }

    fn apply_f(&self, h: &AnyElem) -> Result<AnyElem> {
        each!(&self.kind, m => apply_f(m.as_ref_machine(), h))
    }

    fn generators(&self) -> Vec<Generator<AnyElem>> {
        each!(&self.kind, m => generators(m.as_ref_machine()))
    }

    fn parabolic_trivial(&self) -> bool {
        each!(&self.kind, m => m.parabolic_trivial())
    }
}
