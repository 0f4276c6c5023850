//! JSON forms of expressions, field elements, module elements, claims,
//! certificates, configurations and symbols.
//!
//! Documents that hold tower elements start with a `"context"` list of
//! radicand expressions; decoding replays it so every element of the
//! document lands in one shared tower.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};

use refbloch_core::bloch::{PElement, RPElement};
use refbloch_core::certifier::{Backend, Certificate, CertificateTerm, IdentityClaim};
use refbloch_core::configurations::{ConfigChain, ConfigTuple, ProjPoint, RFModuleElement, ZTuple};
use refbloch_core::expr::{Expr, ToExpr};
use refbloch_core::field::{
    Field, FieldError, QClass, Rational, TowerClass, TowerContext, TowerElement, DEFAULT_DEPTH_CAP,
};
use refbloch_core::milnor::{KMElement, MilnorSymbol};
use refbloch_core::square_algebra::{GroupRingElement, SymSquareElement, WedgeElement};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
    #[error(transparent)]
    Core(#[from] refbloch_core::Error),
    #[error(transparent)]
    Syntax(#[from] serde_json::Error),
}

impl From<FieldError> for JsonError {
    fn from(e: FieldError) -> Self {
        JsonError::Core(e.into())
    }
}

pub type JsonResult<T> = Result<T, JsonError>;

fn shape(path: &str, message: impl Into<String>) -> JsonError {
    JsonError::Shape {
        path: path.to_string(),
        message: message.into(),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> JsonResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| shape(path, "expected an array"))
}

fn pair<'a>(v: &'a Value, path: &str) -> JsonResult<(&'a Value, &'a Value)> {
    match array(v, path)?.as_slice() {
        [a, b] => Ok((a, b)),
        _ => Err(shape(path, "expected a two-element array")),
    }
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> JsonResult<&'a Value> {
    v.get(key)
        .ok_or_else(|| shape(path, format!("missing \"{key}\"")))
}

fn integer(v: &Value, path: &str) -> JsonResult<BigInt> {
    v.as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| shape(path, "expected a decimal integer string"))
}

pub fn expr_to_json(e: &Expr) -> Value {
    let node = |op: &str, args: Vec<Value>| json!({ "op": op, "args": args });
    match e {
        Expr::Int(n) => Value::String(n.to_string()),
        Expr::Add(a) => node("add", a.iter().map(expr_to_json).collect()),
        Expr::Mul(a) => node("mul", a.iter().map(expr_to_json).collect()),
        Expr::Neg(a) => node("neg", vec![expr_to_json(a)]),
        Expr::Inv(a) => node("inv", vec![expr_to_json(a)]),
        Expr::Sqrt(a) => node("sqrt", vec![expr_to_json(a)]),
    }
}

pub fn expr_from_json(v: &Value, path: &str) -> JsonResult<Expr> {
    if v.is_string() {
        return Ok(Expr::Int(integer(v, path)?));
    }
    let op = field(v, "op", path)?
        .as_str()
        .ok_or_else(|| shape(path, "\"op\" must be a string"))?;
    let args: Vec<Expr> = array(field(v, "args", path)?, path)?
        .iter()
        .enumerate()
        .map(|(i, a)| expr_from_json(a, &format!("{path}.args[{i}]")))
        .collect::<JsonResult<_>>()?;
    let unary = |mut args: Vec<Expr>| -> JsonResult<Expr> {
        if args.len() != 1 {
            return Err(shape(path, format!("\"{op}\" takes one argument")));
        }
        Ok(args.pop().unwrap())
    };
    Ok(match op {
        "add" => Expr::Add(args),
        "mul" => Expr::Mul(args),
        "neg" => -unary(args)?,
        "inv" => Expr::inv(unary(args)?),
        "sqrt" => Expr::sqrt(unary(args)?),
        _ => return Err(shape(path, format!("unknown op \"{op}\""))),
    })
}

/// Field backends with a JSON form.
pub trait JsonField: Backend + ToExpr {
    fn class_to_json(c: &Self::Class) -> Value;
    fn class_from_json(v: &Value, path: &str) -> JsonResult<Self::Class>;
    fn context_radicands(ctx: &Self::Context) -> Vec<Self>;
    fn context_depth(ctx: &Self::Context) -> usize;
    /// Adjoin `√radicand` to `ctx`.
    fn extend_context(
        ctx: &Self::Context,
        radicand: &Self,
        cap: usize,
    ) -> JsonResult<Self::Context>;
    /// Canonical value form: a rational string, or radicands plus coefficients.
    fn canonical_json(&self) -> Value;
}

impl JsonField for Rational {
    fn class_to_json(c: &QClass) -> Value {
        json!({
            "sign": if c.is_negative() { "-" } else { "+" },
            "primes": c.primes().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })
    }

    fn class_from_json(v: &Value, path: &str) -> JsonResult<QClass> {
        let negative = match field(v, "sign", path)?.as_str() {
            Some("+") => false,
            Some("-") => true,
            _ => return Err(shape(path, "\"sign\" must be \"+\" or \"-\"")),
        };
        let primes = array(field(v, "primes", path)?, path)?
            .iter()
            .map(|p| {
                p.as_str()
                    .and_then(|s| s.parse::<BigUint>().ok())
                    .ok_or_else(|| shape(path, "primes must be decimal strings"))
            })
            .collect::<JsonResult<Vec<_>>>()?;
        Ok(QClass::new(negative, primes))
    }

    fn context_radicands(_: &()) -> Vec<Rational> {
        Vec::new()
    }

    fn context_depth(_: &()) -> usize {
        0
    }

    fn extend_context(_: &(), radicand: &Rational, _: usize) -> JsonResult<()> {
        Err(FieldError::NotARationalSquare(radicand.to_string()).into())
    }

    fn canonical_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl JsonField for TowerElement {
    fn class_to_json(c: &TowerClass) -> Value {
        Value::String(if c.is_negative() { "neg" } else { "pos" }.into())
    }

    fn class_from_json(v: &Value, path: &str) -> JsonResult<TowerClass> {
        match v.as_str() {
            Some("pos") => Ok(TowerClass::positive()),
            Some("neg") => Ok(TowerClass::negative()),
            _ => Err(shape(path, "class must be \"pos\" or \"neg\"")),
        }
    }

    fn context_radicands(ctx: &Arc<TowerContext>) -> Vec<TowerElement> {
        ctx.radicands()
    }

    fn context_depth(ctx: &Arc<TowerContext>) -> usize {
        ctx.depth()
    }

    fn extend_context(
        ctx: &Arc<TowerContext>,
        radicand: &TowerElement,
        cap: usize,
    ) -> JsonResult<Arc<TowerContext>> {
        Ok(ctx.extend(radicand, cap)?)
    }

    fn canonical_json(&self) -> Value {
        json!({
            "context": self.context_ref().radicands().iter().map(|r| expr_to_json(&r.to_expr())).collect::<Vec<_>>(),
            "coefficients": self.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub fn element_to_json<F: ToExpr>(x: &F) -> Value {
    expr_to_json(&x.to_expr())
}

/// Decoding state: the tower every decoded element is placed in.
pub struct Session<F: JsonField> {
    ctx: F::Context,
    cap: usize,
}

impl<F: JsonField> Default for Session<F> {
    fn default() -> Self {
        Self::new(DEFAULT_DEPTH_CAP)
    }
}

impl<F: JsonField> Session<F> {
    pub fn new(cap: usize) -> Self {
        Session {
            ctx: F::one().context(),
            cap,
        }
    }

    pub fn context(&self) -> &F::Context {
        &self.ctx
    }

    /// Evaluate `e`, growing the session tower up to the depth cap.
    pub fn eval(&mut self, e: &Expr) -> JsonResult<F> {
        let mut ctx = self.ctx.clone();
        let x: F = e.evaluate(&mut ctx)?;
        if F::context_depth(&ctx) > self.cap {
            return Err(FieldError::DepthCap(self.cap).into());
        }
        self.ctx = ctx;
        Ok(x)
    }

    /// Replay a `"context"` list: each radicand must match the session tower
    /// at its level or extend it by one.
    pub fn prime(&mut self, list: &Value, path: &str) -> JsonResult<()> {
        for (k, r) in array(list, path)?.iter().enumerate() {
            let p = format!("{path}[{k}]");
            let radicand = self.element(r, &p)?;
            let have = F::context_radicands(&self.ctx);
            if k < have.len() {
                if have[k] != radicand {
                    return Err(shape(
                        &p,
                        format!("radicand {radicand} conflicts with {}", have[k]),
                    ));
                }
            } else if k == have.len() {
                self.ctx = F::extend_context(&self.ctx, &radicand, self.cap)?;
            } else {
                return Err(shape(&p, "context radicands must be consecutive"));
            }
        }
        Ok(())
    }

    pub fn element(&mut self, v: &Value, path: &str) -> JsonResult<F> {
        let e = expr_from_json(v, path)?;
        self.eval(&e)
    }

    /// Inverse of [`JsonField::canonical_json`].
    pub fn canonical(&mut self, v: &Value, path: &str) -> JsonResult<F> {
        if v.is_string() {
            let s = v.as_str().unwrap();
            let e = match s.split_once('/') {
                Some((n, d)) => Expr::Mul(vec![
                    Expr::Int(integer(&json!(n), path)?),
                    Expr::inv(Expr::Int(integer(&json!(d), path)?)),
                ]),
                None => Expr::Int(integer(v, path)?),
            };
            return self.eval(&e);
        }
        let radicals = array(field(v, "context", path)?, path)?
            .iter()
            .enumerate()
            .map(|(i, r)| expr_from_json(r, &format!("{path}.context[{i}]")).map(Expr::sqrt))
            .collect::<JsonResult<Vec<_>>>()?;
        let mut terms = Vec::new();
        for (i, c) in array(field(v, "coefficients", path)?, path)?
            .iter()
            .enumerate()
        {
            let coefficient = self.canonical(c, &format!("{path}.coefficients[{i}]"))?;
            let mut factors = vec![coefficient.to_expr()];
            factors.extend(
                radicals
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| i >> j & 1 == 1)
                    .map(|(_, r)| r.clone()),
            );
            terms.push(Expr::Mul(factors));
        }
        self.eval(&Expr::Add(terms))
    }

    pub fn context_json(&self) -> Value {
        Value::Array(
            F::context_radicands(&self.ctx)
                .iter()
                .map(element_to_json)
                .collect(),
        )
    }

    /// Prime from `doc["context"]` when the document is an object that has one.
    fn prime_from(&mut self, doc: &Value) -> JsonResult<()> {
        match doc.get("context") {
            Some(list) => self.prime(list, "context"),
            None => Ok(()),
        }
    }

    pub fn group_ring(&mut self, v: &Value, path: &str) -> JsonResult<GroupRingElement<F::Class>> {
        let mut terms = Vec::new();
        for (i, t) in array(v, path)?.iter().enumerate() {
            let p = format!("{path}[{i}]");
            let (c, n) = pair(t, &p)?;
            terms.push((F::class_from_json(c, &p)?, integer(n, &p)?));
        }
        Ok(GroupRingElement::from_terms(terms))
    }

    pub fn rp_element(&mut self, v: &Value, path: &str) -> JsonResult<RPElement<F>> {
        let mut terms = Vec::new();
        for (i, t) in array(v, path)?.iter().enumerate() {
            let p = format!("{path}[{i}]");
            let (x, r) = pair(t, &p)?;
            terms.push((self.element(x, &p)?, self.group_ring(r, &p)?));
        }
        Ok(RPElement::from_terms(terms)?)
    }

    pub fn p_element(&mut self, v: &Value, path: &str) -> JsonResult<PElement<F>> {
        let mut terms = Vec::new();
        for (i, t) in array(v, path)?.iter().enumerate() {
            let p = format!("{path}[{i}]");
            let (x, n) = pair(t, &p)?;
            terms.push((self.element(x, &p)?, integer(n, &p)?));
        }
        Ok(PElement::from_terms(terms)?)
    }

    pub fn claim(&mut self, doc: &Value) -> JsonResult<IdentityClaim<F>> {
        self.prime_from(doc)?;
        let label = field(doc, "label", "claim")?
            .as_str()
            .ok_or_else(|| shape("claim.label", "expected a string"))?;
        let target = self.rp_element(field(doc, "target", "claim")?, "claim.target")?;
        Ok(IdentityClaim::new(target, label))
    }

    /// Accepts `{"context", "terms"}` or a bare term list.
    pub fn certificate(&mut self, doc: &Value) -> JsonResult<Certificate<F>> {
        self.prime_from(doc)?;
        let list = if doc.is_array() {
            doc
        } else {
            field(doc, "terms", "certificate")?
        };
        let mut terms = Vec::new();
        for (i, t) in array(list, "certificate.terms")?.iter().enumerate() {
            let p = format!("certificate.terms[{i}]");
            terms.push(CertificateTerm {
                coefficient: self.group_ring(field(t, "coefficient", &p)?, &p)?,
                x: self.element(field(t, "x", &p)?, &p)?,
                y: self.element(field(t, "y", &p)?, &p)?,
            });
        }
        Ok(Certificate::from_terms(terms))
    }

    pub fn point(&mut self, v: &Value, path: &str) -> JsonResult<ProjPoint<F>> {
        if v.get("inf").and_then(Value::as_bool) == Some(true) {
            return Ok(ProjPoint::Infinity);
        }
        Ok(ProjPoint::Finite(self.element(v, path)?))
    }

    pub fn config_tuple(&mut self, v: &Value, path: &str) -> JsonResult<ConfigTuple<F>> {
        let points = array(v, path)?
            .iter()
            .enumerate()
            .map(|(i, p)| self.point(p, &format!("{path}[{i}]")))
            .collect::<JsonResult<Vec<_>>>()?;
        Ok(ConfigTuple::new(points)?)
    }

    pub fn z_tuple(&mut self, v: &Value, path: &str) -> JsonResult<ZTuple<F>> {
        let entries = array(v, path)?
            .iter()
            .enumerate()
            .map(|(i, z)| self.element(z, &format!("{path}[{i}]")))
            .collect::<JsonResult<Vec<_>>>()?;
        Ok(ZTuple::new(entries)?)
    }

    pub fn rf_module_element(&mut self, v: &Value, path: &str) -> JsonResult<RFModuleElement<F>> {
        let mut terms = Vec::new();
        for (i, t) in array(v, path)?.iter().enumerate() {
            let p = format!("{path}[{i}]");
            let (z, r) = pair(t, &p)?;
            terms.push((self.z_tuple(z, &p)?, self.group_ring(r, &p)?));
        }
        Ok(RFModuleElement::from_terms(terms))
    }

    pub fn symbol(&mut self, v: &Value, path: &str) -> JsonResult<MilnorSymbol<F>> {
        let entries = array(v, path)?
            .iter()
            .enumerate()
            .map(|(i, a)| self.element(a, &format!("{path}[{i}]")))
            .collect::<JsonResult<Vec<_>>>()?;
        Ok(MilnorSymbol::new(entries)?)
    }
}

/// The smallest tower holding every element of `xs`.
pub fn joint_context<'a, F: Field + 'a>(
    xs: impl IntoIterator<Item = &'a F>,
) -> JsonResult<F::Context> {
    let mut ctx = F::one().context();
    for x in xs {
        ctx = F::join_context(&ctx, &x.context())?;
    }
    Ok(ctx)
}

fn context_list<F: JsonField>(ctx: &F::Context) -> Value {
    Value::Array(
        F::context_radicands(ctx)
            .iter()
            .map(element_to_json)
            .collect(),
    )
}

pub fn group_ring_to_json<F: JsonField>(r: &GroupRingElement<F::Class>) -> Value {
    Value::Array(
        r.terms()
            .map(|(c, n)| json!([F::class_to_json(c), n.to_string()]))
            .collect(),
    )
}

pub fn rp_element_to_json<F: JsonField>(e: &RPElement<F>) -> Value {
    Value::Array(
        e.terms()
            .map(|(x, r)| json!([element_to_json(x), group_ring_to_json::<F>(r)]))
            .collect(),
    )
}

pub fn p_element_to_json<F: JsonField>(e: &PElement<F>) -> Value {
    Value::Array(
        e.terms()
            .map(|(x, n)| json!([element_to_json(x), n.to_string()]))
            .collect(),
    )
}

pub fn sym_to_json(s: &SymSquareElement) -> Value {
    Value::Array(
        s.entries()
            .into_iter()
            .map(|(i, j, v)| json!([i, j, v.to_string()]))
            .collect(),
    )
}

pub fn wedge_to_json(w: &WedgeElement) -> Value {
    Value::Array(
        w.entries()
            .into_iter()
            .map(|(i, j, v)| json!([i, j, v.to_string()]))
            .collect(),
    )
}

fn certificate_elements<F: Field>(cert: &Certificate<F>) -> impl Iterator<Item = &F> {
    cert.terms().iter().flat_map(|t| [&t.x, &t.y])
}

pub fn claim_to_json<F: JsonField>(claim: &IdentityClaim<F>) -> JsonResult<Value> {
    let ctx = joint_context(claim.target.support())?;
    Ok(claim_json_in::<F>(claim, &ctx))
}

fn claim_json_in<F: JsonField>(claim: &IdentityClaim<F>, ctx: &F::Context) -> Value {
    let mut m = Map::new();
    m.insert("context".into(), context_list::<F>(ctx));
    m.insert("label".into(), Value::String(claim.label.clone()));
    m.insert("target".into(), rp_element_to_json(&claim.target));
    Value::Object(m)
}

fn terms_json<F: JsonField>(cert: &Certificate<F>) -> Value {
    Value::Array(
        cert.terms()
            .iter()
            .map(|t| json!({ "coefficient": group_ring_to_json::<F>(&t.coefficient), "x": element_to_json(&t.x), "y": element_to_json(&t.y) }))
            .collect(),
    )
}

pub fn certificate_to_json<F: JsonField>(cert: &Certificate<F>) -> JsonResult<Value> {
    let ctx = joint_context(certificate_elements(cert))?;
    Ok(json!({ "context": context_list::<F>(&ctx), "terms": terms_json(cert) }))
}

/// Claim and certificate sharing one context, so they decode in one session.
pub fn proof_to_json<F: JsonField>(
    claim: &IdentityClaim<F>,
    cert: &Certificate<F>,
) -> JsonResult<(Value, Value)> {
    let ctx = joint_context(claim.target.support().chain(certificate_elements(cert)))?;
    Ok((
        claim_json_in(claim, &ctx),
        json!({ "context": context_list::<F>(&ctx), "terms": terms_json(cert) }),
    ))
}

pub fn point_to_json<F: JsonField>(p: &ProjPoint<F>) -> Value {
    match p {
        ProjPoint::Infinity => json!({ "inf": true }),
        ProjPoint::Finite(x) => element_to_json(x),
    }
}

pub fn config_tuple_to_json<F: JsonField>(t: &ConfigTuple<F>) -> Value {
    Value::Array(t.points().iter().map(point_to_json).collect())
}

pub fn config_chain_to_json<F: JsonField>(c: &ConfigChain<F>) -> Value {
    Value::Array(
        c.terms()
            .map(|(t, n)| json!([config_tuple_to_json(t), n.to_string()]))
            .collect(),
    )
}

pub fn z_tuple_to_json<F: JsonField>(z: &ZTuple<F>) -> Value {
    Value::Array(z.entries().iter().map(element_to_json).collect())
}

pub fn rf_module_element_to_json<F: JsonField>(e: &RFModuleElement<F>) -> Value {
    Value::Array(
        e.terms()
            .map(|(z, r)| json!([z_tuple_to_json(z), group_ring_to_json::<F>(r)]))
            .collect(),
    )
}

pub fn symbol_to_json<F: JsonField>(s: &MilnorSymbol<F>) -> Value {
    Value::Array(s.entries().iter().map(element_to_json).collect())
}

pub fn km_element_to_json<F: JsonField>(e: &KMElement<F>) -> Value {
    Value::Array(
        e.terms()
            .map(|(s, n)| json!([symbol_to_json(s), n.to_string()]))
            .collect(),
    )
}
