use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;

use super::oracle::{self, charpoly_oracle, matrix_polynomial};
use super::random::{self, TrialRng};
use super::report::Failure;
use super::{charpoly_diagrammatic, run_trials, VerificationReport};
use crate::algebra::{
    compose, is_relation, max_residual, tensor, FormalSum, LeafPartition, RelationMode,
};
use crate::binding::MatrixBinding;
use crate::diagram::{Dimension, LeafColoring, Mark, TraceDiagram};
use crate::error::{Error, Result};
use crate::eval::{
    self, as_function_matrix, enumerate_colorings, evaluate_closed, evaluate_fast_closed,
    shared_edge_orbit_weight, EvalOptions, Evaluator,
};
use crate::library::{
    antisymmetrizer, binor_relation, ch_diagram, closed_antisym, cross_product, det_sum_term,
    determinant_diagram, dot_product, four_vector_diagram, four_vector_rhs, fricke_diagrams,
    marked_strand, trace_loop, two_node_antisym, two_node_antisym_marked, two_node_factor,
};
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

/// The identities the lab can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    Trace,
    DetDiagram,
    AntisymCollapse,
    Ch,
    ChGeneral,
    Charpoly,
    DetSum,
    SymmetrizerSum,
    AntisymTwoNode,
    Multiplicity,
    Binor,
    FramingIndependence,
    Functoriality,
    Vector,
    Fricke,
    FastClosed,
}

impl Identity {
    pub const ALL: [Identity; 16] = [
        Identity::Trace,
        Identity::DetDiagram,
        Identity::AntisymCollapse,
        Identity::Ch,
        Identity::ChGeneral,
        Identity::Charpoly,
        Identity::DetSum,
        Identity::SymmetrizerSum,
        Identity::AntisymTwoNode,
        Identity::Multiplicity,
        Identity::Binor,
        Identity::FramingIndependence,
        Identity::Functoriality,
        Identity::Vector,
        Identity::Fricke,
        Identity::FastClosed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Trace => "trace",
            Identity::DetDiagram => "det-diagram",
            Identity::AntisymCollapse => "antisym-collapse",
            Identity::Ch => "ch",
            Identity::ChGeneral => "ch-general",
            Identity::Charpoly => "charpoly",
            Identity::DetSum => "det-sum",
            Identity::SymmetrizerSum => "symmetrizer-sum",
            Identity::AntisymTwoNode => "antisym-two-node",
            Identity::Multiplicity => "multiplicity",
            Identity::Binor => "binor",
            Identity::FramingIndependence => "framing-independence",
            Identity::Functoriality => "functoriality",
            Identity::Vector => "vector",
            Identity::Fricke => "fricke",
            Identity::FastClosed => "fast-closed",
        }
    }

    /// Dimensions checked when none is requested.
    pub fn default_dims(self) -> &'static [usize] {
        match self {
            Identity::Trace | Identity::DetDiagram | Identity::Charpoly | Identity::FastClosed => {
                &[2, 3, 4]
            }
            Identity::AntisymCollapse => &[1, 2, 3],
            Identity::Binor | Identity::FramingIndependence | Identity::Vector => &[3],
            Identity::Fricke => &[2],
            _ => &[2, 3],
        }
    }

    /// Identities whose check involves no randomness run a single trial.
    pub fn deterministic(self) -> bool {
        matches!(self, Identity::AntisymCollapse | Identity::AntisymTwoNode)
    }

    fn check_dim(self, n: usize) -> Result<()> {
        let ok = match self {
            Identity::Binor | Identity::FramingIndependence | Identity::Vector => n == 3,
            Identity::Fricke => n == 2,
            Identity::Ch | Identity::ChGeneral | Identity::SymmetrizerSum => (1..=4).contains(&n),
            Identity::AntisymCollapse => (1..=4).contains(&n),
            _ => (1..=5).contains(&n),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{} is not available in dimension {n}",
                self.name()
            )))
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Identity> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "unknown identity {s}; known: {}",
                    Identity::ALL.map(Identity::name).join(", ")
                ))
            })
    }
}

/// Runs one identity in dimension `n`.
pub fn verify(identity: Identity, n: usize, trials: usize, seed: u64) -> Result<VerificationReport> {
    identity.check_dim(n)?;
    let dim = Dimension::new(n)?;
    let trials = if identity.deterministic() { 1 } else { trials };
    let name = identity.name();
    match identity {
        Identity::Trace => run_trials(name, n, trials, seed, |_, rng| trace_trial(dim, rng)),
        Identity::DetDiagram => run_trials(name, n, trials, seed, |_, rng| det_trial(dim, rng)),
        Identity::AntisymCollapse => run_trials(name, n, trials, seed, |_, _| collapse_check(dim)),
        Identity::Ch => run_trials(name, n, trials, seed, |_, rng| ch_trial(dim, rng)),
        Identity::ChGeneral => {
            run_trials(name, n, trials, seed, |_, rng| ch_general_trial(dim, rng))
        }
        Identity::Charpoly => run_trials(name, n, trials, seed, |_, rng| charpoly_trial(n, rng)),
        Identity::DetSum => run_trials(name, n, trials, seed, |t, rng| det_sum_trial(dim, t, rng)),
        Identity::SymmetrizerSum => {
            run_trials(name, n, trials, seed, |_, rng| symmetrizer_trial(dim, rng))
        }
        Identity::AntisymTwoNode => run_trials(name, n, trials, seed, |_, _| two_node_check(dim)),
        Identity::Multiplicity => {
            run_trials(name, n, trials, seed, |_, rng| multiplicity_trial(dim, rng))
        }
        Identity::Binor => run_trials(name, n, trials, seed, |_, rng| binor_trial(dim, rng)),
        Identity::FramingIndependence => {
            run_trials(name, n, trials, seed, |_, rng| framing_trial(dim, rng))
        }
        Identity::Functoriality => {
            run_trials(name, n, trials, seed, |_, rng| functoriality_trial(dim, rng))
        }
        Identity::Vector => run_trials(name, n, trials, seed, |t, rng| vector_trial(dim, t, rng)),
        Identity::Fricke => run_trials(name, n, trials, seed, |_, rng| fricke_trial(dim, rng)),
        Identity::FastClosed => {
            run_trials(name, n, trials, seed, |_, rng| fast_closed_trial(dim, rng))
        }
    }
}

fn labels(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|j| format!("{prefix}{j}")).collect()
}

fn bind_all(dim: Dimension, pairs: &[(&str, &Matrix)]) -> Result<MatrixBinding> {
    let mut b = MatrixBinding::new(dim);
    for (l, m) in pairs {
        b.bind(*l, (*m).clone())?;
    }
    Ok(b)
}

/// `Ok(None)` when equal, otherwise a failure naming the difference.
fn compare_matrices(what: &str, got: &Matrix, expected: &Matrix) -> Option<Failure> {
    (got != expected).then(|| Failure::with_residual(what.to_string(), max_residual(&(got - expected))))
}

fn compare_scalars(what: &str, got: &Scalar, expected: &Scalar) -> Option<Failure> {
    (got != expected).then(|| {
        Failure::with_residual(
            format!(
                "{what}: got {} expected {}",
                scalar::format(got),
                scalar::format(expected)
            ),
            Some(got - expected),
        )
    })
}

fn first_failure(checks: impl IntoIterator<Item = Option<Failure>>) -> Option<Failure> {
    checks.into_iter().flatten().next()
}

fn trace_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let a = random::int_matrix(rng, dim.get());
    let b = bind_all(dim, &[("A", &a)])?;
    let v = evaluate_closed(&trace_loop(dim, vec![Mark::new("A")]), &b)?;
    Ok(compare_scalars("trace loop", &v, &a.trace()))
}

fn det_constant(n: usize) -> Scalar {
    scalar::sign_power(n / 2) * scalar::factorial(n)
}

fn det_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let n = dim.get();
    let a = random::int_matrix(rng, n);
    let b = bind_all(dim, &[("A", &a)])?;
    let v = evaluate_closed(&determinant_diagram(dim, "A"), &b)?;
    Ok(compare_scalars("determinant diagram", &v, &(det_constant(n) * a.determinant())))
}

fn collapse_check(dim: Dimension) -> Result<Option<Failure>> {
    let n = dim.get();
    let empty = MatrixBinding::new(dim);
    let over = antisymmetrizer(dim, n + 1).function_matrix(&empty)?;
    if !over.is_zero() {
        return Ok(Some(Failure::with_residual(
            format!("antisymmetrizer on {} strands is nonzero", n + 1),
            max_residual(over.matrix()),
        )));
    }
    // Control: on n strands it must not vanish.
    let at = antisymmetrizer(dim, n).function_matrix(&empty)?;
    Ok(at
        .is_zero()
        .then(|| Failure::new(format!("antisymmetrizer on {n} strands vanished"))))
}

/// `Σ_i (−1)^i k!/(k−i)! · value(closed antisymmetrizer on k−i strands) · A^i`.
fn lemma_expansion(dim: Dimension, k: usize, a: &Matrix, b: &MatrixBinding) -> Result<(Matrix, Vec<Scalar>)> {
    let mut acc = Matrix::zeros(a.rows(), a.cols());
    let mut coefficients = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let closed = closed_antisym(dim, k - i, "A")?.closed_value(b)?;
        let c = scalar::sign_power(i) * scalar::factorial(k) / scalar::factorial(k - i) * closed;
        acc = &acc + &a.pow(i).scale(&c);
        coefficients.push(c);
    }
    Ok((acc, coefficients))
}

fn ch_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let n = dim.get();
    let a = random::int_matrix(rng, n);
    let b = bind_all(dim, &[("A", &a)])?;
    let ch = ch_diagram(dim, &vec!["A".to_string(); n])?;
    let fm = ch.function_matrix(&b)?;
    if !fm.is_zero() {
        return Ok(Some(Failure::with_residual(
            "Cayley–Hamilton diagram is nonzero",
            max_residual(fm.matrix()),
        )));
    }
    let c = charpoly_oracle(&a);
    let nf = scalar::factorial(n);
    let scaled: Vec<Scalar> = c.iter().map(|x| x * &nf).collect();
    let expected = matrix_polynomial(&scaled, &a);
    let (expansion, terms) = lemma_expansion(dim, n, &a, &b)?;
    let mut checks = vec![
        compare_matrices("diagram differs from n!·Σ c_i A^i", fm.matrix(), &expected),
        compare_matrices("cycle expansion differs from the diagram", &expansion, fm.matrix()),
    ];
    for (i, (t, s)) in terms.iter().zip(&scaled).enumerate() {
        checks.push(compare_scalars(&format!("coefficient of A^{i}"), t, s));
    }
    if n == 2 {
        let tr = a.trace();
        let det = a.determinant();
        let regrouped = (&(&a.pow(2) - &a.scale(&tr)) + &Matrix::identity(2).scale(&det))
            .scale(&scalar::int(2));
        checks.push(compare_matrices("2(A² − tr(A)A + det(A)I)", &regrouped, fm.matrix()));
        let half = (&tr * &tr - a.pow(2).trace()) / scalar::int(2);
        checks.push(compare_scalars("det(A) = (tr(A)² − tr(A²))/2", &det, &half));
    }
    Ok(first_failure(checks))
}

/// The six classical terms of the two-matrix identity, with signs.
fn six_terms(a1: &Matrix, a2: &Matrix) -> Vec<Matrix> {
    let i = Matrix::identity(a1.rows());
    let (t1, t2) = (a1.trace(), a2.trace());
    vec![
        i.scale(&(&t1 * &t2)),
        a2 * a1,
        a1 * a2,
        -&a1.scale(&t2),
        -&a2.scale(&t1),
        -&i.scale(&(a1 * a2).trace()),
    ]
}

fn ch_general_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let n = dim.get();
    let names = labels("A", n);
    let mats: Vec<Matrix> = (0..n).map(|_| random::int_matrix(rng, n)).collect();
    let pairs: Vec<(&str, &Matrix)> = names.iter().map(|s| s.as_str()).zip(&mats).collect();
    let b = bind_all(dim, &pairs)?;
    let ch = ch_diagram(dim, &names)?;
    let fm = ch.function_matrix(&b)?;
    if !fm.is_zero() {
        return Ok(Some(Failure::with_residual(
            "generalized Cayley–Hamilton diagram is nonzero",
            max_residual(fm.matrix()),
        )));
    }
    if n == 2 {
        let mut expected = six_terms(&mats[0], &mats[1]);
        let sum = expected
            .iter()
            .fold(Matrix::zeros(2, 2), |acc, m| &acc + m);
        if !sum.is_zero() {
            return Ok(Some(Failure::with_residual(
                "six-term identity is nonzero",
                max_residual(&sum),
            )));
        }
        for (m, (c, _)) in ch.term_matrices(&b)?.into_iter().zip(ch.terms()) {
            let signed = m.matrix().scale(c);
            match expected.iter().position(|e| *e == signed) {
                Some(p) => {
                    expected.swap_remove(p);
                }
                None => return Ok(Some(Failure::new("a diagram term matches no classical term"))),
            }
        }
    }
    Ok(None)
}

fn charpoly_trial(n: usize, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let a = random::int_matrix(rng, n);
    let d = charpoly_diagrammatic(&a)?;
    let o = charpoly_oracle(&a);
    Ok(d.iter()
        .zip(&o)
        .enumerate()
        .find_map(|(i, (x, y))| compare_scalars(&format!("c_{i}"), x, y)))
}

fn det_sum_value(dim: Dimension, b: &MatrixBinding) -> Result<Scalar> {
    let n = dim.get();
    let mut total = Scalar::zero();
    for i in 0..=n {
        let v = evaluate_closed(&det_sum_term(dim, i, "A", "B")?, b)?;
        total += v / (scalar::factorial(i) * scalar::factorial(n - i));
    }
    Ok(total * scalar::sign_power(n / 2))
}

fn det_sum_trial(dim: Dimension, trial: usize, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let n = dim.get();
    let a = random::int_matrix(rng, n);
    let bm = random::int_matrix(rng, n);
    let b = bind_all(dim, &[("A", &a), ("B", &bm)])?;
    let mut checks = vec![compare_scalars(
        "det(A+B)",
        &det_sum_value(dim, &b)?,
        &(&a + &bm).determinant(),
    )];
    if trial == 0 {
        let doubled = bind_all(dim, &[("A", &a), ("B", &a)])?;
        let two_n = num_traits::pow(scalar::int(2), n);
        checks.push(compare_scalars(
            "det(2A) = 2^n det(A)",
            &det_sum_value(dim, &doubled)?,
            &(two_n * a.determinant()),
        ));
    }
    Ok(first_failure(checks))
}

fn symmetrizer_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let n = dim.get();
    let a = random::int_matrix(rng, n);
    let b = bind_all(dim, &[("A", &a)])?;
    for k in 0..=n {
        let lhs = ch_diagram(dim, &vec!["A".to_string(); k])?.function_matrix(&b)?;
        let (rhs, _) = lemma_expansion(dim, k, &a, &b)?;
        if let Some(f) = compare_matrices(&format!("cycle expansion for k = {k}"), lhs.matrix(), &rhs) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

fn two_node_check(dim: Dimension) -> Result<Option<Failure>> {
    let n = dim.get();
    let empty = MatrixBinding::new(dim);
    for k in 0..=n {
        let anti = antisymmetrizer(dim, k).function_matrix(&empty)?;
        let two = as_function_matrix(&two_node_antisym(dim, k)?, &empty)?;
        let scaled = two.matrix().scale(&two_node_factor(n, k));
        if let Some(f) = compare_matrices(&format!("two-node expansion for k = {k}"), anti.matrix(), &scaled) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Colorings examined per diagram in the multiplicity check.
const MULTIPLICITY_SAMPLE: usize = 24;

fn multiplicity_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let n = dim.get();
    let a = random::int_matrix(rng, n);
    let b = bind_all(dim, &[("A", &a)])?;
    for k in 0..=n {
        let marks = if rng.random_bool(0.5) { vec![Mark::new("A")] } else { Vec::new() };
        let d = two_node_antisym_marked(dim, k, &marks)?;
        let shared: Vec<String> = d
            .edges()
            .filter(|e| e.id.starts_with('s'))
            .map(|e| e.id.clone())
            .collect();
        let expected_count = (1..=shared.len()).product::<usize>();
        let multiplicity = scalar::factorial(shared.len());
        for kappa in enumerate_colorings(&d, &LeafColoring::new())?.take(MULTIPLICITY_SAMPLE) {
            let single = scalar::int(eval::signature(&d, &kappa)? as i64)
                * eval::coefficient(&d, &kappa, &b)?;
            let (total, count) = shared_edge_orbit_weight(&d, &kappa, &shared, &b)?;
            if count != expected_count {
                return Ok(Some(Failure::new(format!(
                    "k = {k}: orbit has {count} colorings, expected {expected_count}"
                ))));
            }
            if let Some(f) = compare_scalars(&format!("k = {k}: orbit weight"), &total, &(&multiplicity * &single)) {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

/// The binor relation fed through strands marked `A` and `B`.
fn marked_binor(dim: Dimension) -> Result<FormalSum> {
    let feed = tensor(
        &marked_strand(dim, vec![Mark::new("A")]),
        &marked_strand(dim, vec![Mark::new("B")]),
    )?;
    binor_relation(dim)?.compose(&FormalSum::single(feed)?)
}

fn random_pair_binding(dim: Dimension, rng: &mut TrialRng) -> Result<MatrixBinding> {
    let n = dim.get();
    let a = random::rational_matrix(rng, n);
    let bm = random::rational_matrix(rng, n);
    bind_all(dim, &[("A", &a), ("B", &bm)])
}

fn binor_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let b = random_pair_binding(dim, rng)?;
    let bare = binor_relation(dim)?;
    for (what, sum, mode) in [
        ("binor relation", bare.clone(), RelationMode::ExactOnBinding),
        ("binor relation, per basis", bare, RelationMode::AllBases),
        ("binor relation after marked strands", marked_binor(dim)?, RelationMode::ExactOnBinding),
    ] {
        let check = is_relation(&sum, &b, mode)?;
        if !check.holds {
            return Ok(Some(Failure::with_residual(what, check.residual.map(|r| r.value))));
        }
    }
    Ok(None)
}

fn framing_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let b = random_pair_binding(dim, rng)?;
    let relation = marked_binor(dim)?;
    // Control: flipping one sign gives a sum that is not a relation in any framing.
    let wrong = FormalSum::from_terms(
        dim,
        relation
            .terms()
            .iter()
            .enumerate()
            .map(|(i, (c, d))| (if i == 2 { -c.clone() } else { c.clone() }, d.clone())),
    )?;
    for p in LeafPartition::all(4) {
        let check = is_relation(&relation.reframe_positional(&p)?, &b, RelationMode::ExactOnBinding)?;
        if !check.holds {
            return Ok(Some(Failure::with_residual(
                format!("not a relation with inputs {:?}, outputs {:?}", p.inputs, p.outputs),
                check.residual.map(|r| r.value),
            )));
        }
        let control = is_relation(&wrong.reframe_positional(&p)?, &b, RelationMode::ExactOnBinding)?;
        if control.holds {
            return Ok(Some(Failure::new(format!(
                "control sum vanished with inputs {:?}, outputs {:?}",
                p.inputs, p.outputs
            ))));
        }
    }
    Ok(None)
}

/// Random framed diagram with at most `max_in` inputs and `max_out` outputs.
fn bounded_diagram(
    rng: &mut TrialRng,
    dim: Dimension,
    inputs: Option<usize>,
    max_in: usize,
    max_out: usize,
) -> TraceDiagram {
    loop {
        let d = random::framed_diagram(rng, dim, &["A", "B"], inputs);
        if d.inputs().len() <= max_in && d.outputs().len() <= max_out {
            return d;
        }
    }
}

fn functoriality_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let b = random_pair_binding(dim, rng)?;
    let bottom = bounded_diagram(rng, dim, None, 2, 3);
    let top = bounded_diagram(rng, dim, Some(bottom.outputs().len()), 3, 3);
    let glued = compose(&top, &bottom)?;
    let fm_top = as_function_matrix(&top, &b)?;
    let fm_bottom = as_function_matrix(&bottom, &b)?;
    let fm_glued = as_function_matrix(&glued, &b)?;
    let product = fm_top.matrix() * fm_bottom.matrix();
    if let Some(f) = compare_matrices("compose vs matrix product", fm_glued.matrix(), &product) {
        return Ok(Some(f));
    }
    let side = bounded_diagram(rng, dim, None, 2, 2);
    let fm_side = as_function_matrix(&side, &b)?;
    let joined = as_function_matrix(&tensor(&bottom, &side)?, &b)?;
    Ok(compare_matrices(
        "tensor vs Kronecker product",
        joined.matrix(),
        &fm_bottom.matrix().kron(fm_side.matrix()),
    ))
}

fn vector_trial(dim: Dimension, trial: usize, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let vs: Vec<Vec<Scalar>> = (0..4).map(|_| random::rational_vector(rng, 3)).collect();
    let names = ["u", "v", "w", "x"];
    let mut b = MatrixBinding::new(dim);
    for (name, v) in names.iter().zip(&vs) {
        b.bind_vector(*name, v.clone())?;
    }
    b.bind_vector("same", vs[0].clone())?;
    let (u, v, w, x) = (&vs[0], &vs[1], &vs[2], &vs[3]);

    let cross = as_function_matrix(&cross_product(dim, "u", "v")?, &b)?;
    let expected = Matrix::from_rows(oracle::cross(u, v).into_iter().map(|c| vec![c]).collect());
    let mut checks = vec![compare_matrices("cross product", cross.matrix(), &expected)];
    checks.push(compare_scalars(
        "dot product",
        &evaluate_closed(&dot_product(dim, "u", "v")?, &b)?,
        &oracle::dot(u, v),
    ));
    let lhs = evaluate_closed(&four_vector_diagram(dim, ["u", "v", "w", "x"])?, &b)?;
    let classical = oracle::dot(u, w) * oracle::dot(v, x) - oracle::dot(u, x) * oracle::dot(v, w);
    checks.push(compare_scalars("(u×v)·(w×x)", &lhs, &classical));
    checks.push(compare_scalars(
        "(u×v)·(w×x) via cross products",
        &lhs,
        &oracle::dot(&oracle::cross(u, v), &oracle::cross(w, x)),
    ));
    let relation = FormalSum::single(four_vector_diagram(dim, ["u", "v", "w", "x"])?)?
        .sub(&four_vector_rhs(dim, ["u", "v", "w", "x"])?)?;
    let check = is_relation(&relation, &b, RelationMode::ExactOnBinding)?;
    if !check.holds {
        checks.push(Some(Failure::with_residual(
            "four-vector relation",
            check.residual.map(|r| r.value),
        )));
    }
    if trial == 0 {
        let selfcross = as_function_matrix(&cross_product(dim, "u", "same")?, &b)?;
        if !selfcross.is_zero() {
            checks.push(Some(Failure::new("u × u is nonzero")));
        }
    }
    Ok(first_failure(checks))
}

fn fricke_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let a = random::rational_matrix(rng, 2);
    let bm = random::rational_matrix(rng, 2);
    let c = random::rational_matrix(rng, 2);
    let b = bind_all(dim, &[("A", &a), ("B", &bm), ("C", &c)])?;
    let value = fricke_diagrams(dim, "A", "B", "C")?.closed_value(&b)?;
    Ok(first_failure([
        compare_scalars(
            "Fricke traces",
            &oracle::fricke_lhs(&a, &bm, &c),
            &oracle::fricke_rhs(&a, &bm, &c),
        ),
        compare_scalars("Fricke diagram sum", &value, &Scalar::zero()),
    ]))
}

fn fast_closed_trial(dim: Dimension, rng: &mut TrialRng) -> Result<Option<Failure>> {
    let n = dim.get();
    let d = random::vertex_free_closed(rng, dim, &["A", "B", "C"], 3, 3);
    let mats: Vec<Matrix> = (0..3).map(|_| random::int_matrix(rng, n)).collect();
    let b = bind_all(dim, &[("A", &mats[0]), ("B", &mats[1]), ("C", &mats[2])])?;
    let fast = evaluate_fast_closed(&d, &b)?;
    let slow = evaluate_closed(&d, &b)?;
    let unpruned = Evaluator::new(EvalOptions { prune_zeros: false }).evaluate_closed(&d, &b)?;
    Ok(first_failure([
        compare_scalars("fast path vs enumeration", &fast, &slow),
        compare_scalars("pruned vs unpruned enumeration", &slow, &unpruned),
    ]))
}
