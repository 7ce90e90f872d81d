//! JSON dumps and loads. Scalars are exact strings (`"3/2"`, `"-1"`);
//! matrices are lists of rows; order vectors use the 1-based family labels.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::defm::{HullGenerator, HullPresentation, Lifting, SchemeEquations, SurjectionReport};
use crate::error::{Error, Result};
use crate::extension::{CofilteredModule, FamilyRef};
use crate::fdmod::FdModule;
use crate::field::Field;
use crate::fixtures::{self, Family};
use crate::linalg::Matrix;
use crate::pointed::{build_k_gamma, BasisElem, PointedAlgebra};
use crate::presentation::{parse_poly, Presentation};
use crate::quiver::OrderedQuiver;
use crate::uniserial::{ClassificationResult, Counterexample};
use crate::weyl::GradedWindowModule;

fn bad(what: &str) -> Error {
    Error::Parse(format!("expected {what}"))
}

pub fn scalar<F: Field>(x: &F) -> Value {
    Value::String(x.to_string())
}

/// Strings or integers.
pub fn parse_scalar<F: Field>(v: &Value) -> Result<F> {
    match v {
        Value::String(s) => F::parse_exact(s.trim()).ok_or_else(|| Error::Parse(format!("bad scalar {s}"))),
        Value::Number(n) => n.as_i64().map(F::from_i64).ok_or_else(|| Error::Parse(format!("bad scalar {n}"))),
        _ => Err(bad("a scalar")),
    }
}

pub fn matrix<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(scalar).collect())).collect())
}

/// A list of rows; `cols` is needed when there are no rows.
pub fn parse_matrix<F: Field>(v: &Value, rows: usize, cols: usize) -> Result<Matrix<F>> {
    let rs = v.as_array().ok_or_else(|| bad("a matrix as a list of rows"))?;
    if rs.len() != rows {
        return Err(Error::Shape(format!("expected {rows} rows, found {}", rs.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for r in rs {
        let entries = r.as_array().ok_or_else(|| bad("a row"))?;
        if entries.len() != cols {
            return Err(Error::Shape(format!("expected {cols} columns, found {}", entries.len())));
        }
        out.push(entries.iter().map(parse_scalar).collect::<Result<Vec<F>>>()?);
    }
    Ok(Matrix::from_rows_with_cols(out, cols))
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| bad(what))?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad(what)))
        .collect()
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| bad(what))?
        .iter()
        .map(|s| s.as_u64().map(|x| x as usize).ok_or_else(|| bad(what)))
        .collect()
}

pub fn presentation<F: Field>(p: &Presentation<F>) -> Value {
    let mut o = Map::new();
    o.insert("name".into(), json!(p.name));
    o.insert("generators".into(), json!(p.generators));
    o.insert("relations".into(), json!(p.relations.iter().map(|r| r.render(&p.generators)).collect::<Vec<_>>()));
    if let Some(rad) = &p.radical {
        o.insert("radical".into(), json!(rad.iter().map(|r| r.render(&p.generators)).collect::<Vec<_>>()));
    }
    if let Some(slots) = &p.slots {
        o.insert("slots".into(), json!(slots));
    }
    Value::Object(o)
}

pub fn parse_presentation<F: Field>(v: &Value) -> Result<Presentation<F>> {
    let gens = strings(v.get("generators").ok_or_else(|| bad("generators"))?, "generator names")?;
    let polys = |key: &str| -> Result<Option<Vec<_>>> {
        match v.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(x) => Ok(Some(strings(x, key)?.iter().map(|s| parse_poly(s, &gens)).collect::<Result<Vec<_>>>()?)),
        }
    };
    let name = v.get("name").and_then(Value::as_str).unwrap_or("algebra");
    let mut p = Presentation::new(name, gens.clone(), polys("relations")?.unwrap_or_default())?;
    p.radical = polys("radical")?;
    if let Some(s) = v.get("slots").filter(|s| !s.is_null()) {
        let slots: Vec<(usize, usize)> = serde_json::from_value(s.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if slots.len() != gens.len() {
            return Err(Error::Shape("one slot per generator expected".into()));
        }
        p.slots = Some(slots);
    }
    Ok(p)
}

/// `{"dim": d, "action": {"x": [[...]]}}`
pub fn module<F: Field>(m: &FdModule<F>) -> Value {
    let mut action = Map::new();
    for (g, a) in m.presentation().generators.iter().zip(m.action()) {
        action.insert(g.clone(), matrix(a));
    }
    json!({ "dim": m.dim(), "action": Value::Object(action) })
}

pub fn parse_module<F: Field>(v: &Value, pres: &Arc<Presentation<F>>) -> Result<FdModule<F>> {
    let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("module dim"))? as usize;
    let action = v.get("action").ok_or_else(|| bad("module action"))?;
    let mats = pres
        .generators
        .iter()
        .map(|g| match action.get(g) {
            Some(a) => parse_matrix(a, dim, dim),
            None => Err(Error::Parse(format!("no matrix for generator {g}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    FdModule::new(pres.clone(), mats)
}

pub fn family<F: Field>(f: &Family<F>) -> Value {
    json!({
        "field": F::descriptor(),
        "algebra": presentation(&f.pres),
        "members": f.names.iter().zip(&f.members).map(|(n, m)| {
            let mut o = module(m);
            o["name"] = json!(n);
            o
        }).collect::<Vec<_>>(),
    })
}

/// Either `{"fixture": "a2"}` or an explicit algebra with named members.
pub fn parse_family<F: Field>(v: &Value) -> Result<Family<F>> {
    if let Some(name) = v.get("fixture").and_then(Value::as_str) {
        return fixtures::by_name(name);
    }
    let pres = Arc::new(parse_presentation(v.get("algebra").ok_or_else(|| bad("algebra"))?)?);
    let members = v.get("members").and_then(Value::as_array).ok_or_else(|| bad("members"))?;
    let mut names = Vec::new();
    let mut mods = Vec::new();
    for (k, m) in members.iter().enumerate() {
        names.push(m.get("name").and_then(Value::as_str).map_or_else(|| (k + 1).to_string(), str::to_string));
        mods.push(parse_module(m, &pres)?);
    }
    if mods.is_empty() {
        return Err(Error::Invalid("empty family".into()));
    }
    Ok(Family { pres, names, members: mods })
}

/// Field descriptor of a family file, `"Q"` when absent.
pub fn field_of(v: &Value) -> String {
    v.get("field").and_then(Value::as_str).unwrap_or("Q").to_string()
}

pub fn pointed_algebra<F: Field>(a: &PointedAlgebra<F>) -> Value {
    let basis: Vec<Value> = a
        .basis()
        .iter()
        .map(|b| json!({ "label": b.label, "slot": [b.slot.0 + 1, b.slot.1 + 1], "degree": b.degree }))
        .collect();
    let mut table = Vec::new();
    for (&(x, y), prod) in a.structure_constants() {
        if prod.is_empty() {
            continue;
        }
        let terms: Vec<Value> = prod.iter().map(|(c, k)| json!([a.basis()[*c].label, scalar(k)])).collect();
        table.push(json!({ "left": a.basis()[x].label, "right": a.basis()[y].label, "product": terms }));
    }
    let mut o = Map::new();
    if let Some(g) = a.gamma() {
        o.insert("order_vector".into(), json!((1..=g.len()).map(|i| g.alpha(i)).collect::<Vec<_>>()));
        o.insert("points".into(), json!(g.vertices()));
    } else {
        o.insert("points".into(), json!(a.num_points()));
    }
    o.insert("dim".into(), json!(a.dim()));
    o.insert("nilpotency".into(), json!(a.nilpotency()));
    o.insert("basis".into(), Value::Array(basis));
    o.insert("table".into(), Value::Array(table));
    Value::Object(o)
}

/// Inverse of [`pointed_algebra`]; slots in the dump are 1-based.
pub fn parse_pointed_algebra<F: Field>(v: &Value) -> Result<PointedAlgebra<F>> {
    let raw = v.get("basis").and_then(Value::as_array).ok_or_else(|| bad("basis"))?;
    let mut basis = Vec::new();
    for b in raw {
        let label = b.get("label").and_then(Value::as_str).ok_or_else(|| bad("basis label"))?;
        let slot = usize_list(b.get("slot").ok_or_else(|| bad("basis slot"))?, "a slot")?;
        let degree = b.get("degree").and_then(Value::as_u64).ok_or_else(|| bad("basis degree"))? as usize;
        if slot.len() != 2 || slot.contains(&0) {
            return Err(bad("a 1-based slot pair"));
        }
        basis.push(BasisElem { label: label.to_string(), slot: (slot[0] - 1, slot[1] - 1), degree });
    }
    let idx = |l: &Value| -> Result<usize> {
        let l = l.as_str().ok_or_else(|| bad("a basis label"))?;
        basis.iter().position(|b| b.label == l).ok_or_else(|| Error::Parse(format!("unknown basis label {l}")))
    };
    let mut table = BTreeMap::new();
    for e in v.get("table").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]) {
        let (x, y) = (idx(e.get("left").unwrap_or(&Value::Null))?, idx(e.get("right").unwrap_or(&Value::Null))?);
        let mut prod = Vec::new();
        for t in e.get("product").and_then(Value::as_array).ok_or_else(|| bad("product terms"))? {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("[label, scalar]"))?;
            prod.push((idx(&pair[0])?, parse_scalar(&pair[1])?));
        }
        table.insert((x, y), prod);
    }
    let points = match v.get("points") {
        Some(Value::Array(a)) => a.len(),
        Some(p) => p.as_u64().ok_or_else(|| bad("points"))? as usize,
        None => return Err(bad("points")),
    };
    let nil = v.get("nilpotency").and_then(Value::as_u64).map(|n| n as usize);
    Ok(PointedAlgebra::from_parts(points, basis, table, nil))
}

fn labels(order: &[usize]) -> Vec<usize> {
    order.iter().map(|a| a + 1).collect()
}

fn parse_order(v: &Value, family_len: usize) -> Result<Vec<usize>> {
    let raw = usize_list(v, "an order vector of 1-based member labels")?;
    if raw.iter().any(|&a| a == 0 || a > family_len) {
        return Err(Error::Invalid(format!("order vector labels must lie in 1..={family_len}")));
    }
    Ok(raw.into_iter().map(|a| a - 1).collect())
}

/// The module in its own basis together with the adapted basis of the
/// cofiltration and the order vector.
pub fn cofiltered<F: Field>(x: &CofilteredModule<F>) -> Result<Value> {
    let basis = crate::uniserial::adapted_basis(x)?;
    Ok(json!({
        "order": labels(x.order()),
        "level_dims": (0..=x.len()).map(|i| x.level(i).dim()).collect::<Vec<_>>(),
        "surjections": (1..=x.len()).map(|i| matrix(x.surjection(i))).collect::<Vec<_>>(),
        "module": module(x.module()),
        "adapted_basis": matrix(&basis),
    }))
}

/// Reads the module and an adapted basis (columns `ι^F_1, …, ι^F_n`, in
/// which the action is block lower triangular with the family on the
/// diagonal). Without a basis the module must already be triangular.
pub fn parse_cofiltered<F: Field>(v: &Value, family: &FamilyRef<F>) -> Result<CofilteredModule<F>> {
    let order = parse_order(v.get("order").ok_or_else(|| bad("order"))?, family.len())?;
    let pres = family[0].presentation().clone();
    let m = parse_module(v.get("module").ok_or_else(|| bad("module"))?, &pres)?;
    match v.get("adapted_basis").filter(|b| !b.is_null()) {
        None => CofilteredModule::from_triangular(family.clone(), order, m),
        Some(b) => {
            let p = parse_matrix(b, m.dim(), m.dim())?;
            let inv = p.inverse().ok_or_else(|| Error::Invalid("adapted basis is singular".into()))?;
            CofilteredModule::from_triangular(family.clone(), order, m.change_basis(&p)?)?.transport(&inv)
        }
    }
}

/// Liftings over `k[Γ]`: the order vector and every nonzero coefficient.
pub fn lifting<F: Field>(l: &Lifting<F>) -> Result<Value> {
    let g = l.base().gamma().ok_or_else(|| Error::Invalid("only liftings over k[Γ] are serialised".into()))?;
    let gens = &l.family()[0].presentation().generators;
    let mut coeffs = Vec::new();
    for (gi, cs) in l.coefficients().iter().enumerate() {
        for (c, m) in cs.iter().enumerate() {
            if l.base().basis()[c].degree > 0 && !m.is_zero() {
                coeffs.push(json!({ "generator": gens[gi], "monomial": l.base().basis()[c].label, "matrix": matrix(m) }));
            }
        }
    }
    Ok(json!({
        "order_vector": (1..=g.len()).map(|i| g.alpha(i)).collect::<Vec<_>>(),
        "coefficients": coeffs,
    }))
}

pub fn parse_lifting<F: Field>(v: &Value, family: &FamilyRef<F>) -> Result<Lifting<F>> {
    let order = parse_order(v.get("order_vector").ok_or_else(|| bad("order_vector"))?, family.len())?;
    let g = OrderedQuiver::from_order_vector(labels(&order));
    let base = Arc::new(build_k_gamma::<F>(&g)?);
    let points: Vec<usize> = g.vertices().into_iter().map(|v| v - 1).collect();
    let mut l = Lifting::trivial(family.clone(), points.clone(), base.clone())?;
    let pres = family[0].presentation();
    let mut coeffs = l.coefficients().to_vec();
    for c in v.get("coefficients").and_then(Value::as_array).ok_or_else(|| bad("coefficients"))? {
        let gen = c.get("generator").and_then(Value::as_str).ok_or_else(|| bad("generator"))?;
        let gi = pres.generator_index(gen).ok_or_else(|| Error::Parse(format!("unknown generator {gen}")))?;
        let mono = c.get("monomial").and_then(Value::as_str).ok_or_else(|| bad("monomial"))?;
        let b = base.label_index(mono).ok_or_else(|| Error::Parse(format!("unknown monomial {mono}")))?;
        let (i, j) = base.basis()[b].slot;
        let m = parse_matrix(c.get("matrix").ok_or_else(|| bad("matrix"))?, family[points[i]].dim(), family[points[j]].dim())?;
        coeffs[gi][b] = m;
    }
    l = Lifting::new(family.clone(), points, base, coeffs)?;
    Ok(l)
}

/// `{"points": [1, 2], "generators": [{"name": "s", "slot": [2, 1]}],
/// "relations": [{"slot": [1, 1], "poly": "s*s"}], "cutoff": null}` with
/// slots given by point labels.
pub fn parse_hull<F: Field>(v: &Value) -> Result<HullPresentation<F>> {
    let points = usize_list(v.get("points").ok_or_else(|| bad("points"))?, "point labels")?;
    let pidx = |x: &Value| -> Result<(usize, usize)> {
        let s = usize_list(x, "a slot")?;
        if s.len() != 2 {
            return Err(bad("a slot [target, source]"));
        }
        let f = |l: usize| points.iter().position(|&p| p == l).ok_or_else(|| Error::SlotMismatch(format!("unknown point {l}")));
        Ok((f(s[0])?, f(s[1])?))
    };
    let mut generators = Vec::new();
    for g in v.get("generators").and_then(Value::as_array).ok_or_else(|| bad("generators"))? {
        let name = g.get("name").and_then(Value::as_str).ok_or_else(|| bad("generator name"))?;
        generators.push(HullGenerator { name: name.to_string(), slot: pidx(g.get("slot").ok_or_else(|| bad("slot"))?)? });
    }
    let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
    let mut relations = Vec::new();
    for r in v.get("relations").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]) {
        let slot = pidx(r.get("slot").ok_or_else(|| bad("relation slot"))?)?;
        let poly = parse_poly(r.get("poly").and_then(Value::as_str).ok_or_else(|| bad("relation poly"))?, &names)?;
        relations.push((slot, poly));
    }
    let cutoff = v.get("cutoff").and_then(Value::as_u64).map(|c| c as usize);
    let h = HullPresentation { points, generators, relations, cutoff };
    h.check()?;
    Ok(h)
}

pub fn hull<F: Field>(h: &HullPresentation<F>) -> Value {
    let names = h.generator_names();
    json!({
        "points": h.points,
        "generators": h.generators.iter().map(|g| json!({
            "name": g.name, "slot": [h.points[g.slot.0], h.points[g.slot.1]],
        })).collect::<Vec<_>>(),
        "relations": h.relations.iter().map(|(s, r)| json!({
            "slot": [h.points[s.0], h.points[s.1]], "poly": r.render(&names),
        })).collect::<Vec<_>>(),
        "cutoff": h.cutoff,
    })
}

pub fn scheme_equations<F: Field>(e: &SchemeEquations<F>) -> Value {
    json!({
        "variables": e.variables,
        "equations": e.equations.iter().map(|(r, label, p)| json!({
            "relation": r, "coefficient_of": label, "poly": p.render(&e.variables),
        })).collect::<Vec<_>>(),
    })
}

pub fn surjection_report(r: &SurjectionReport) -> Value {
    serde_json::to_value(r).expect("plain data")
}

fn counterexample<F: Field>(c: &Counterexample<F>, names: &[String]) -> Result<Value> {
    Ok(json!({
        "kind": c.kind,
        "members": c.members.iter().map(|&a| names[a].clone()).collect::<Vec<_>>(),
        "module": cofiltered(&c.module)?,
        "certificate": c.certificate,
        "length_two_submodules": c.length_two.iter().map(matrix).collect::<Vec<_>>(),
    }))
}

pub fn classification<F: Field>(r: &ClassificationResult<F>, names: &[String]) -> Result<Value> {
    let inds = r
        .indecomposables
        .iter()
        .map(|i| {
            Ok(json!({
                "alpha": names[i.alpha],
                "n": i.n,
                "module": cofiltered(&i.module)?,
                "certificate": i.certificate,
                "restrictions_invertible": i.restrictions_invertible,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "quiver": r.quiver,
        "star_holds": r.star_holds,
        "violations": r.violations.iter().map(|&v| names[v].clone()).collect::<Vec<_>>(),
        "indecomposables": inds,
        "obstructed": r.obstructed.iter().map(|&(a, n)| json!({ "alpha": names[a], "n": n })).collect::<Vec<_>>(),
        "counterexamples": r.counterexamples.iter().map(|c| counterexample(c, names)).collect::<Result<Vec<_>>>()?,
    }))
}

pub fn window<F: Field>(m: &GradedWindowModule<F>) -> Value {
    json!({
        "range": [m.lo, m.hi],
        "bound": m.bound,
        "dims": m.dims,
        "t": m.t.iter().enumerate().map(|(k, a)| json!({ "from": m.lo + k as i64, "matrix": matrix(a) })).collect::<Vec<_>>(),
        "D": m.d.iter().enumerate().map(|(k, a)| json!({ "from": m.lo + k as i64 + 1, "matrix": matrix(a) })).collect::<Vec<_>>(),
    })
}
