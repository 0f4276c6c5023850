use alloc::vec::Vec;

use num_bigint::BigInt;

use super::element::{coinvariants, PElement, RPElement};
use crate::error::{Error, Result};
use crate::field::{Field, Rational, SquareClass};
use crate::square_algebra::{
    bracket, AugmentationIdealElement, Factorize, GroupRingElement, MultiplicativeBasis,
    SymSquareElement,
};

fn class<F: Field>(x: &F) -> Result<GroupRingElement<F::Class>> {
    Ok(GroupRingElement::from_class(x.square_class()?))
}

fn minus_one<F: Field>() -> GroupRingElement<F::Class> {
    GroupRingElement::from_class(F::Class::minus_one())
}

pub(crate) fn check_pair<F: Field>(x: &F, y: &F) -> Result<()> {
    for v in [x, y] {
        if v.is_zero() || v.is_one() {
            return Err(Error::InvalidArgument(alloc::format!(
                "relation argument {} must avoid 0 and 1",
                v
            )));
        }
    }
    if x == y {
        return Err(Error::InvalidArgument(alloc::format!(
            "relation arguments coincide: {}",
            x
        )));
    }
    Ok(())
}

/// The five arguments of the relation at `(x, y)`:
/// `x, y, y/x, (1−x⁻¹)/(1−y⁻¹), (1−x)/(1−y)`.
pub fn relation_arguments<F: Field>(x: &F, y: &F) -> Result<[F; 5]> {
    check_pair(x, y)?;
    let xi = x.try_inv()?;
    let yi = y.try_inv()?;
    Ok([
        x.clone(),
        y.clone(),
        y.try_div(x)?,
        xi.one_minus()?.try_div(&yi.one_minus()?)?,
        x.one_minus()?.try_div(&y.one_minus()?)?,
    ])
}

/// `S_{x,y} = [x] − [y] + ⟨x⟩[y/x] − ⟨x⁻¹−1⟩[(1−x⁻¹)/(1−y⁻¹)] + ⟨1−x⟩[(1−x)/(1−y)]`.
pub fn s_relation<F: Field>(x: &F, y: &F) -> Result<RPElement<F>> {
    let [a0, a1, a2, a3, a4] = relation_arguments(x, y)?;
    let one = GroupRingElement::one();
    let xi_minus_one = x.try_inv()?.try_sub(&F::one())?;
    RPElement::from_terms([
        (a0, one.clone()),
        (a1, -&one),
        (a2, class(x)?),
        (a3, -&class(&xi_minus_one)?),
        (a4, class(&x.one_minus()?)?),
    ])
}

/// `R_{x,y} = [x] − [y] + [y/x] − [(1−x⁻¹)/(1−y⁻¹)] + [(1−x)/(1−y)]`.
pub fn r_relation<F: Field>(x: &F, y: &F) -> Result<PElement<F>> {
    let [a0, a1, a2, a3, a4] = relation_arguments(x, y)?;
    let (p, m) = (BigInt::from(1), BigInt::from(-1));
    PElement::from_terms([
        (a0, p.clone()),
        (a1, m.clone()),
        (a2, p.clone()),
        (a3, m),
        (a4, p),
    ])
}

/// `λ₁([x]) = ⟨⟨1−x⟩⟩⟨⟨x⟩⟩`, extended `R_F`-linearly.
pub fn lambda1<F: Field>(e: &RPElement<F>) -> Result<AugmentationIdealElement<F::Class>> {
    let mut acc = GroupRingElement::zero();
    for (x, r) in e.terms() {
        let img = bracket(&x.one_minus()?)?.into_ring() * bracket(x)?.into_ring();
        acc = acc + r * &img;
    }
    AugmentationIdealElement::new(acc)
}

/// `λ([x]) = (1−x)∘x`, extended linearly.
pub fn lambda2<F: Factorize>(
    p: &PElement<F>,
    basis: &MultiplicativeBasis<F>,
) -> Result<SymSquareElement> {
    let mut acc = SymSquareElement::zero();
    for (x, n) in p.terms() {
        let img = crate::square_algebra::expand_sym(&x.one_minus()?, x, basis)?;
        acc = &acc + &img.scale(n);
    }
    Ok(crate::square_algebra::reduce_at_minus_one(&acc, basis))
}

/// Prime basis covering every `x` and `1 − x` in the support.
pub fn lambda_basis<'a>(
    support: impl IntoIterator<Item = &'a Rational>,
) -> MultiplicativeBasis<Rational> {
    let mut values: Vec<Rational> = Vec::new();
    for x in support {
        values.push(x.clone());
        values.push(Rational::from_integer(1.into()) - x);
    }
    MultiplicativeBasis::primes_covering(values.iter())
}

/// The pair `Λ(e) = (λ₁(e), λ(coinvariants(e)))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTarget<C: SquareClass> {
    pub first: AugmentationIdealElement<C>,
    pub second: SymSquareElement,
}

impl<C: SquareClass> LambdaTarget<C> {
    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }
}

pub fn big_lambda<F: Factorize>(
    e: &RPElement<F>,
    basis: &MultiplicativeBasis<F>,
) -> Result<LambdaTarget<F::Class>> {
    Ok(LambdaTarget {
        first: lambda1(e)?,
        second: lambda2(&coinvariants(e), basis)?,
    })
}

/// `ψ₁(x) = [x] + ⟨−1⟩[x⁻¹]`.
pub fn psi1<F: Field>(x: &F) -> Result<RPElement<F>> {
    let xi = x.try_inv()?;
    RPElement::from_terms([(x.clone(), GroupRingElement::one()), (xi, minus_one::<F>())])
}

/// `ψ₂(x) = ⟨x⁻¹−1⟩[x] + ⟨1−x⟩[x⁻¹]` for `x ≠ 1`, and `ψ₂(1) = 0`.
pub fn psi2<F: Field>(x: &F) -> Result<RPElement<F>> {
    let xi = x.try_inv()?;
    if x.is_one() {
        return Ok(RPElement::zero());
    }
    RPElement::from_terms([
        (x.clone(), class(&xi.try_sub(&F::one())?)?),
        (xi, class(&x.one_minus()?)?),
    ])
}

/// `ψ_i` selected by index (1 or 2).
pub fn psi<F: Field>(index: u8, x: &F) -> Result<RPElement<F>> {
    match index {
        1 => psi1(x),
        2 => psi2(x),
        _ => Err(Error::InvalidArgument(alloc::format!(
            "psi index {} is not 1 or 2",
            index
        ))),
    }
}

/// `C(x) = [x] + ⟨−1⟩[1−x] + ⟨⟨1−x⟩⟩ψ₁(x)`.
pub fn c_element<F: Field>(x: &F) -> Result<RPElement<F>> {
    if x.is_zero() || x.is_one() {
        return Err(Error::InvalidArgument(alloc::format!(
            "C({}) needs an argument outside 0 and 1",
            x
        )));
    }
    let head = RPElement::from_terms([
        (x.clone(), GroupRingElement::one()),
        (x.one_minus()?, minus_one::<F>()),
    ])?;
    let tail = psi1(x)?.scale(bracket(&x.one_minus()?)?.as_ring());
    Ok(head + tail)
}
