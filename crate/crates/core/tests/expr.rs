use refbloch_core::expr::{Expr, ToExpr};
use refbloch_core::field::{Field, Rational, TowerContext, TowerElement};

#[test]
fn sqrt_two_squared() {
    let e = Expr::Mul(vec![Expr::sqrt(Expr::int(2)), Expr::sqrt(Expr::int(2))]);
    let mut ctx = TowerContext::root();
    let v: TowerElement = e.evaluate(&mut ctx).unwrap();
    assert_eq!(v, TowerElement::from_i64(2));
    assert_eq!(ctx.depth(), 1);
}

#[test]
fn rational_sqrt_needs_square() {
    let mut ctx = ();
    let v: Rational = Expr::sqrt(Expr::inv(Expr::int(4)))
        .evaluate(&mut ctx)
        .unwrap();
    assert_eq!(v, Rational::from_ratio(1, 2).unwrap());
    assert!(Expr::sqrt(Expr::int(2))
        .evaluate::<Rational>(&mut ctx)
        .is_err());
    assert!(Expr::inv(Expr::int(0))
        .evaluate::<Rational>(&mut ctx)
        .is_err());
}

#[test]
fn tower_round_trip() {
    let mut ctx = TowerContext::root();
    let src = Expr::Add(vec![
        Expr::int(5),
        Expr::Mul(vec![Expr::int(-2), Expr::sqrt(Expr::int(6))]),
        Expr::sqrt(Expr::Add(vec![Expr::int(3), Expr::sqrt(Expr::int(2))])),
        Expr::inv(Expr::int(7)),
    ]);
    let v: TowerElement = src.evaluate(&mut ctx).unwrap();
    let mut fresh = TowerContext::root();
    let back: TowerElement = v.to_expr().evaluate(&mut fresh).unwrap();
    assert_eq!(back, v);
    assert_eq!(TowerElement::from_i64(0).to_expr(), Expr::int(0));
    assert_eq!(
        Rational::from_ratio(-3, 7).unwrap().to_expr().to_string(),
        "mul(-3, inv(7))"
    );
}
