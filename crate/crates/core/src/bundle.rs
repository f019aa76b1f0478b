//! Coend structure tensors and test modules.
//!
//! Index order of every stored tensor is (inputs…, outputs…). For a test
//! module V the dual V^∨ uses the dual basis, so `ev` has indices
//! (V^∨, V), `coev` has (V, V^∨) and `i_v` has (V^∨, V, A).

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::DenseTensor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestModule {
    pub name: String,
    pub dim: usize,
    pub braid: DenseTensor,
    pub braid_inv: DenseTensor,
    pub twist: DenseTensor,
    pub twist_inv: DenseTensor,
    pub ev: DenseTensor,
    pub coev: DenseTensor,
    pub i_v: DenseTensor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoendBundle {
    pub name: String,
    pub dim: usize,
    /// 1 for ℚ, otherwise N for ℚ(ζ_N).
    pub field_order: u32,
    pub delta: DenseTensor,
    pub eps: DenseTensor,
    pub s: DenseTensor,
    pub sinv: DenseTensor,
    pub mu: DenseTensor,
    pub eta: DenseTensor,
    pub omega_plus: DenseTensor,
    pub omega_minus: DenseTensor,
    pub theta_plus: DenseTensor,
    pub theta_minus: DenseTensor,
    pub braid: DenseTensor,
    pub braid_inv: DenseTensor,
    pub modules: Vec<TestModule>,
}

/// Parameters of a pointed braided category on ℤ/m-graded lines:
/// `b(g,h) = ζ_N^{beta·g·h}` and `θ_g = ζ_N^{twist[g]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianParams {
    pub m: usize,
    pub field_order: u32,
    pub beta: i64,
    pub twist: Vec<i64>,
}

impl AbelianParams {
    pub fn bichar(&self, g: usize, h: usize) -> Scalar {
        Scalar::zeta(self.field_order, self.beta * (g * h) as i64)
    }

    pub fn theta(&self, g: usize) -> Scalar {
        Scalar::zeta(self.field_order, self.twist[g])
    }

    /// Checks the parameters define a bicharacter and a compatible ribbon twist.
    pub fn check(&self) -> Result<()> {
        let n = self.field_order as i64;
        let mut errs = Vec::new();
        if self.m == 0 || self.twist.len() != self.m {
            return Err(Error::Bundle(vec!["shape: twist table length must equal m ≥ 1".into()]));
        }
        if (self.beta * self.m as i64).rem_euclid(n) != 0 {
            errs.push("bicharacter-period: beta·m must vanish modulo the field order".into());
        }
        let m = self.m;
        'outer: for g in 0..m {
            for h in 0..m {
                let lhs = self.twist[(g + h) % m];
                let rhs = self.twist[g] + self.twist[h] + 2 * self.beta * (g * h) as i64;
                if (lhs - rhs).rem_euclid(n) != 0 {
                    errs.push(format!("twist-balancing: θ_{{g+h}} ≠ θ_g θ_h b(g,h) b(h,g) at g={g}, h={h}"));
                    break 'outer;
                }
            }
        }
        for g in 0..m {
            if (self.twist[g] - self.twist[(m - g) % m]).rem_euclid(n) != 0 {
                errs.push(format!("twist-duality: θ_{g} ≠ θ_{}", (m - g) % m));
                break;
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Bundle(errs))
        }
    }
}

fn delta_fn(a: usize, b: usize) -> Scalar {
    if a == b {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

/// The pointed coend: basis `e_g`, group-like coproduct, convolution product,
/// pairing `ω(e_g,e_h) = (b(g,h)b(h,g))^{-1}`; plus the regular test module.
pub fn bundle_from_abelian_group(name: &str, p: &AbelianParams) -> Result<CoendBundle> {
    p.check()?;
    let m = p.m;
    let d = m;
    let neg = |g: usize| (m - g) % m;
    let mono = |g: usize, h: usize| &p.bichar(g, h) * &p.bichar(h, g);
    let delta = DenseTensor::from_fn(vec![d; 3], |i| Scalar::from_int((i[0] == i[1] && i[0] == i[2]) as i64));
    let eps = DenseTensor::from_fn(vec![d], |_| Scalar::one());
    let s = DenseTensor::from_fn(vec![d; 2], |i| delta_fn(i[1], neg(i[0])));
    let mu = DenseTensor::from_fn(vec![d; 3], |i| delta_fn(i[2], (i[0] + i[1]) % m));
    let eta = DenseTensor::from_fn(vec![d], |i| delta_fn(i[0], 0));
    let omega_minus = DenseTensor::from_fn(vec![d; 2], |i| mono(i[0], i[1]).inv().unwrap());
    let omega_plus = DenseTensor::from_fn(vec![d; 2], |i| mono(i[0], i[1]));
    let theta_plus = DenseTensor::from_fn(vec![d], |i| p.theta(i[0]));
    let theta_minus = DenseTensor::from_fn(vec![d], |i| p.theta(i[0]).inv().unwrap());
    let flip = DenseTensor::from_fn(vec![d; 4], |i| Scalar::from_int((i[0] == i[3] && i[1] == i[2]) as i64));

    let v = m;
    let mbraid = DenseTensor::from_fn(vec![v; 4], |i| {
        if i[0] == i[3] && i[1] == i[2] {
            p.bichar(i[0], i[1])
        } else {
            Scalar::zero()
        }
    });
    let mbraid_inv = DenseTensor::from_fn(vec![v; 4], |i| {
        if i[0] == i[3] && i[1] == i[2] {
            p.bichar(i[1], i[0]).inv().unwrap()
        } else {
            Scalar::zero()
        }
    });
    let twist = DenseTensor::from_fn(vec![v; 2], |i| if i[0] == i[1] { p.theta(i[0]) } else { Scalar::zero() });
    let twist_inv =
        DenseTensor::from_fn(vec![v; 2], |i| if i[0] == i[1] { p.theta(i[0]).inv().unwrap() } else { Scalar::zero() });
    let pairing = DenseTensor::from_fn(vec![v; 2], |i| delta_fn(i[0], i[1]));
    let i_v = DenseTensor::from_fn(vec![v, v, d], |i| {
        if i[0] == i[1] && i[1] == i[2] {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let module = TestModule {
        name: "regular".into(),
        dim: v,
        braid: mbraid,
        braid_inv: mbraid_inv,
        twist,
        twist_inv,
        ev: pairing.clone(),
        coev: pairing,
        i_v,
    };
    let field_order = if p.field_order <= 2 { 1 } else { p.field_order };
    Ok(CoendBundle {
        name: name.to_string(),
        dim: d,
        field_order,
        delta,
        eps,
        sinv: s.clone(),
        s,
        mu,
        eta,
        omega_plus,
        omega_minus,
        theta_plus,
        theta_minus,
        braid: flip.clone(),
        braid_inv: flip,
        modules: vec![module],
    })
}

pub fn builtin_params(name: &str) -> Option<AbelianParams> {
    let p = |m: usize, n: u32, beta: i64, twist: &[i64]| AbelianParams { m, field_order: n, beta, twist: twist.to_vec() };
    match name {
        "trivial" => Some(p(1, 1, 0, &[0])),
        "zmod2" => Some(p(2, 2, 1, &[0, 0])),
        "zmod3" => Some(p(3, 3, 1, &[0, 1, 1])),
        "zmod4" => Some(p(4, 4, 1, &[0, 1, 0, 1])),
        _ => None,
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["trivial", "zmod2", "zmod3", "zmod4"];

pub fn builtin_bundle(name: &str) -> Option<CoendBundle> {
    builtin_params(name).map(|p| bundle_from_abelian_group(name, &p).expect("built-in parameters are consistent"))
}

pub fn builtin_bundles() -> Vec<CoendBundle> {
    BUILTIN_NAMES.iter().map(|n| builtin_bundle(n).unwrap()).collect()
}

/// Resolves a bundle by built-in name, file path, or file name on the
/// colon-separated search path `HOPFC_BUNDLE_PATH`.
pub fn resolve_bundle(name: &str) -> Result<CoendBundle> {
    if let Some(b) = builtin_bundle(name) {
        return Ok(b);
    }
    let direct = PathBuf::from(name);
    if direct.is_file() {
        return load_bundle(&direct);
    }
    if let Ok(path) = std::env::var("HOPFC_BUNDLE_PATH") {
        for dir in path.split(':').filter(|s| !s.is_empty()) {
            for cand in [Path::new(dir).join(name), Path::new(dir).join(format!("{name}.json"))] {
                if cand.is_file() {
                    return load_bundle(&cand);
                }
            }
        }
    }
    Err(Error::Other(format!("unknown bundle '{name}' (not built in, not a file, not on HOPFC_BUNDLE_PATH)")))
}

pub fn load_bundle(path: &Path) -> Result<CoendBundle> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Other(format!("{}: {e}", path.display())))?;
    bundle_from_json(&text)
}

fn scalar_to_json(s: &Scalar) -> Value {
    if s.order() == 1 {
        Value::String(s.to_exact_string())
    } else {
        Value::Array(
            s.coeffs()
                .iter()
                .map(|c| {
                    Value::String(if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) })
                })
                .collect(),
        )
    }
}

fn tensor_to_json(t: &DenseTensor) -> Value {
    fn rec(t: &DenseTensor, depth: usize, offset: usize, stride: usize) -> Value {
        if depth == t.rank() {
            return scalar_to_json(&t.entries[offset]);
        }
        let d = t.shape[depth];
        let sub = stride / d;
        Value::Array((0..d).map(|k| rec(t, depth + 1, offset + k * sub, sub)).collect())
    }
    rec(t, 0, 0, t.len())
}

fn scalar_from_json(v: &Value, order: u32, ctx: &str) -> Result<Scalar> {
    let bad = || Error::Parse { line: 0, msg: format!("{ctx}: expected an exact scalar string or coefficient list") };
    match v {
        Value::String(s) => Scalar::parse(s, order),
        Value::Number(n) if n.is_i64() => Ok(Scalar::from_int(n.as_i64().unwrap())),
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| c.as_str().ok_or_else(bad).and_then(crate::scalar::parse_rational))
                .collect::<Result<Vec<_>>>()?;
            Ok(Scalar::from_poly(order, coeffs))
        }
        _ => Err(bad()),
    }
}

fn tensor_from_json(v: &Value, shape: Vec<usize>, order: u32, ctx: &str) -> Result<DenseTensor> {
    let mut entries = Vec::with_capacity(shape.iter().product());
    fn rec(v: &Value, shape: &[usize], order: u32, ctx: &str, out: &mut Vec<Scalar>) -> Result<()> {
        if shape.is_empty() {
            out.push(scalar_from_json(v, order, ctx)?);
            return Ok(());
        }
        let arr = v
            .as_array()
            .filter(|a| a.len() == shape[0])
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("{ctx}: expected an array of length {}", shape[0]) })?;
        for item in arr {
            rec(item, &shape[1..], order, ctx, out)?;
        }
        Ok(())
    }
    rec(v, &shape, order, ctx, &mut entries)?;
    Ok(DenseTensor { shape, entries })
}

fn parse_field(s: &str) -> Result<u32> {
    if s == "Q" {
        return Ok(1);
    }
    s.strip_prefix("Q(zeta_")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|n| n.parse::<u32>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse { line: 0, msg: format!("bad field '{s}'") })
}

pub fn bundle_to_json(b: &CoendBundle) -> Value {
    let field = if b.field_order == 1 { "Q".to_string() } else { format!("Q(zeta_{})", b.field_order) };
    let modules: Vec<Value> = b
        .modules
        .iter()
        .map(|m| {
            json!({
                "name": m.name,
                "dim": m.dim,
                "braid": tensor_to_json(&m.braid),
                "braid_inv": tensor_to_json(&m.braid_inv),
                "twist": tensor_to_json(&m.twist),
                "twist_inv": tensor_to_json(&m.twist_inv),
                "ev": tensor_to_json(&m.ev),
                "coev": tensor_to_json(&m.coev),
                "i_v": tensor_to_json(&m.i_v),
            })
        })
        .collect();
    json!({
        "name": b.name,
        "dim": b.dim,
        "field": field,
        "delta": tensor_to_json(&b.delta),
        "eps": tensor_to_json(&b.eps),
        "s": tensor_to_json(&b.s),
        "sinv": tensor_to_json(&b.sinv),
        "mu": tensor_to_json(&b.mu),
        "eta": tensor_to_json(&b.eta),
        "omega_plus": tensor_to_json(&b.omega_plus),
        "omega_minus": tensor_to_json(&b.omega_minus),
        "theta_plus": tensor_to_json(&b.theta_plus),
        "theta_minus": tensor_to_json(&b.theta_minus),
        "braid": tensor_to_json(&b.braid),
        "braid_inv": tensor_to_json(&b.braid_inv),
        "modules": modules,
    })
}

pub fn bundle_from_json(text: &str) -> Result<CoendBundle> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    let dim = v["dim"].as_u64().ok_or(Error::Parse { line: 0, msg: "missing 'dim'".into() })? as usize;
    let order = parse_field(v["field"].as_str().unwrap_or("Q"))?;
    let name = v["name"].as_str().unwrap_or("file").to_string();
    let t = |key: &str, rank: usize| -> Result<DenseTensor> {
        let node = v.get(key).ok_or_else(|| Error::Parse { line: 0, msg: format!("missing '{key}'") })?;
        tensor_from_json(node, vec![dim; rank], order, key)
    };
    let mut modules = Vec::new();
    if let Some(ms) = v.get("modules").and_then(Value::as_array) {
        for (k, m) in ms.iter().enumerate() {
            let vd = m["dim"].as_u64().ok_or(Error::Parse { line: 0, msg: format!("module {k}: missing 'dim'") })?
                as usize;
            let mt = |key: &str, shape: Vec<usize>| -> Result<DenseTensor> {
                let node = m.get(key).ok_or_else(|| Error::Parse { line: 0, msg: format!("module {k}: missing '{key}'") })?;
                tensor_from_json(node, shape, order, key)
            };
            modules.push(TestModule {
                name: m["name"].as_str().unwrap_or("module").to_string(),
                dim: vd,
                braid: mt("braid", vec![vd; 4])?,
                braid_inv: mt("braid_inv", vec![vd; 4])?,
                twist: mt("twist", vec![vd; 2])?,
                twist_inv: mt("twist_inv", vec![vd; 2])?,
                ev: mt("ev", vec![vd; 2])?,
                coev: mt("coev", vec![vd; 2])?,
                i_v: mt("i_v", vec![vd, vd, dim])?,
            });
        }
    }
    Ok(CoendBundle {
        name,
        dim,
        field_order: order,
        delta: t("delta", 3)?,
        eps: t("eps", 1)?,
        s: t("s", 2)?,
        sinv: t("sinv", 2)?,
        mu: t("mu", 3)?,
        eta: t("eta", 1)?,
        omega_plus: t("omega_plus", 2)?,
        omega_minus: t("omega_minus", 2)?,
        theta_plus: t("theta_plus", 1)?,
        theta_minus: t("theta_minus", 1)?,
        braid: t("braid", 4)?,
        braid_inv: t("braid_inv", 4)?,
        modules,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parameters_are_consistent() {
        for n in BUILTIN_NAMES {
            builtin_params(n).unwrap().check().unwrap();
        }
    }

    #[test]
    fn bad_twist_is_named() {
        let p = AbelianParams { m: 3, field_order: 3, beta: 1, twist: vec![0, 0, 0] };
        match p.check() {
            Err(Error::Bundle(e)) => assert!(e[0].starts_with("twist-balancing")),
            other => panic!("{other:?}"),
        }
        let p = AbelianParams { m: 2, field_order: 3, beta: 1, twist: vec![0, 0] };
        assert!(matches!(p.check(), Err(Error::Bundle(e)) if e[0].starts_with("bicharacter-period")));
    }

    #[test]
    fn json_roundtrip() {
        for b in builtin_bundles() {
            let text = serde_json::to_string(&bundle_to_json(&b)).unwrap();
            assert_eq!(bundle_from_json(&text).unwrap(), b);
        }
    }
}
