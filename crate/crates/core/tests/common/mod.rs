//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use proptest::prelude::*;
use saturate::calculus::rewritable_positions;
use saturate::logic::{HasVariables, Inference};
use saturate::{
    factoring, normalized_signature, paramodulation, reflexivity_resolution, rename_apart, resolution, AgentKind,
    AgentSpec, Atom, Clause, EnvConfig, InferenceRule, Literal, Orientation, ProblemSource, Role, SaturationEnv,
    StepResult, Substitution, Term,
};

pub fn mock_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems/TPTP-mock")
}

pub fn problem(domain: &str, name: &str) -> PathBuf {
    mock_root().join("Problems").join(domain).join(format!("{name}.p"))
}

pub fn domain_problems(domain: &str) -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(mock_root().join("Problems").join(domain))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "p"))
        .collect();
    paths.sort();
    paths
}

/// The `% Status` header of a bundled problem.
pub fn declared_status(path: &std::path::Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .find_map(|l| {
            l.strip_prefix("% Status")
                .map(|r| r.trim_start_matches([' ', ':']).trim().to_string())
        })
        .unwrap_or_default()
}

// ---------------------------------------------------------------------------
// Ground satisfiability oracle: truth tables over every congruence of the
// subterm-closed ground term set.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfiable,
    Unsatisfiable,
}

/// Constants occurring in `clauses`, or a single fresh one if there are none.
pub fn constants(clauses: &[Clause]) -> Vec<Term> {
    fn walk(t: &Term, out: &mut BTreeSet<String>) {
        if let Term::Function { name, arguments } = t {
            if arguments.is_empty() {
                out.insert(name.clone());
            }
            arguments.iter().for_each(|a| walk(a, out));
        }
    }
    let mut names = BTreeSet::new();
    for c in clauses {
        for l in &c.literals {
            l.atom.arguments.iter().for_each(|a| walk(a, &mut names));
        }
    }
    if names.is_empty() {
        names.insert("c0".to_string());
    }
    names.into_iter().map(Term::constant).collect()
}

/// Every instance of each clause that maps its variables into `universe`.
pub fn ground_instances(clauses: &[Clause], universe: &[Term]) -> Vec<Vec<Literal>> {
    let mut out = Vec::new();
    for c in clauses {
        let vars: Vec<String> = c.variables().into_iter().collect();
        let mut choice = vec![0usize; vars.len()];
        loop {
            let mut s = Substitution::new();
            for (v, &k) in vars.iter().zip(&choice) {
                s.bind(v.clone(), universe[k].clone());
            }
            out.push(c.literals.iter().map(|l| saturate::apply_substitution(&s, l)).collect());
            let mut pos = 0;
            while pos < choice.len() {
                choice[pos] += 1;
                if choice[pos] < universe.len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == choice.len() {
                break;
            }
        }
    }
    out
}

/// Decides satisfiability of ground clauses with equality by brute force.
pub fn ground_verdict(clauses: &[Vec<Literal>]) -> Verdict {
    let mut terms: Vec<Term> = Vec::new();
    let mut index: HashMap<Term, usize> = HashMap::new();
    fn collect(t: &Term, terms: &mut Vec<Term>, index: &mut HashMap<Term, usize>) {
        assert!(t.is_ground(), "oracle needs ground input, got {t}");
        if let Term::Function { arguments, .. } = t {
            arguments.iter().for_each(|a| collect(a, terms, index));
        }
        if !index.contains_key(t) {
            index.insert(t.clone(), terms.len());
            terms.push(t.clone());
        }
    }
    for c in clauses {
        for l in c {
            l.atom.arguments.iter().for_each(|a| collect(a, &mut terms, &mut index));
        }
    }
    assert!(
        terms.len() <= 11,
        "term set too large for partition enumeration: {}",
        terms.len()
    );
    let argument_ids: Vec<Vec<usize>> = terms
        .iter()
        .map(|t| match t {
            Term::Function { arguments, .. } => arguments.iter().map(|a| index[a]).collect(),
            Term::Variable(_) => unreachable!(),
        })
        .collect();
    let head = |t: &Term| match t {
        Term::Function { name, arguments } => (name.clone(), arguments.len()),
        Term::Variable(_) => unreachable!(),
    };
    let heads: Vec<(String, usize)> = terms.iter().map(head).collect();

    let mut class = vec![0usize; terms.len()];
    let mut satisfiable = false;
    for_each_partition(terms.len(), &mut class, 0, 0, &mut |class| {
        if satisfiable || !is_congruence(class, &heads, &argument_ids) {
            return;
        }
        if assignment_exists(clauses, class, &index) {
            satisfiable = true;
        }
    });
    if satisfiable {
        Verdict::Satisfiable
    } else {
        Verdict::Unsatisfiable
    }
}

/// Restricted growth strings: `class[i] <= 1 + max(class[..i])`.
fn for_each_partition(n: usize, class: &mut Vec<usize>, i: usize, used: usize, visit: &mut impl FnMut(&[usize])) {
    if i == n {
        visit(class);
        return;
    }
    for k in 0..=used {
        class[i] = k;
        for_each_partition(n, class, i + 1, used.max(k + 1), visit);
    }
}

fn is_congruence(class: &[usize], heads: &[(String, usize)], args: &[Vec<usize>]) -> bool {
    for i in 0..class.len() {
        for j in i + 1..class.len() {
            if class[i] != class[j]
                && heads[i] == heads[j]
                && args[i].iter().zip(&args[j]).all(|(&a, &b)| class[a] == class[b])
            {
                return false;
            }
        }
    }
    true
}

fn assignment_exists(clauses: &[Vec<Literal>], class: &[usize], index: &HashMap<Term, usize>) -> bool {
    let mut atoms: HashMap<(String, Vec<usize>), usize> = HashMap::new();
    // Each clause becomes a list of (atom, polarity), or None if already true.
    let mut cnf: Vec<Vec<(usize, bool)>> = Vec::new();
    for c in clauses {
        let mut lits = Vec::new();
        let mut true_already = false;
        for l in c {
            let ids: Vec<usize> = l.atom.arguments.iter().map(|a| class[index[a]]).collect();
            if l.atom.is_equality() {
                if (ids[0] == ids[1]) != l.negated {
                    true_already = true;
                }
            } else {
                let next = atoms.len();
                let id = *atoms.entry((l.atom.name.clone(), ids)).or_insert(next);
                lits.push((id, !l.negated));
            }
        }
        if !true_already {
            if lits.is_empty() {
                return false;
            }
            cnf.push(lits);
        }
    }
    let k = atoms.len();
    assert!(k <= 20, "too many ground atoms for a truth table: {k}");
    (0u32..1 << k).any(|bits| {
        cnf.iter()
            .all(|c| c.iter().any(|&(a, positive)| ((bits >> a) & 1 == 1) == positive))
    })
}

/// Ground verdict on the instances of `clauses` over their own constants.
/// `Unsatisfiable` is conclusive for the original set; `Satisfiable` is
/// conclusive only when the clauses are ground already.
pub fn instance_verdict(clauses: &[Clause]) -> Verdict {
    ground_verdict(&ground_instances(clauses, &constants(clauses)))
}

// ---------------------------------------------------------------------------
// Proof replay: re-run the cited rule on the cited parents.

/// Every conclusion `rule` can draw from `parents` in the cited order.
pub fn all_conclusions(rule: InferenceRule, parents: &[&Clause]) -> Vec<Clause> {
    let mut out = Vec::new();
    match (rule, parents) {
        (InferenceRule::Resolution, &[c1, c2]) => {
            let c2 = rename_apart(c2, &c1.variables());
            for i in 0..c1.len() {
                for j in 0..c2.len() {
                    out.extend(resolution(c1, i, &c2, j).ok());
                }
            }
        }
        (InferenceRule::Paramodulation, &[c1, c2]) => {
            let c2 = rename_apart(c2, &c1.variables());
            for eq in 0..c1.len() {
                for pos in rewritable_positions(&c2) {
                    for o in [Orientation::LeftToRight, Orientation::RightToLeft] {
                        out.extend(paramodulation(c1, eq, &c2, &pos, o).ok());
                    }
                }
            }
        }
        (InferenceRule::Factoring, &[c]) => {
            for i in 0..c.len() {
                for j in 0..c.len() {
                    if i != j {
                        out.extend(factoring(c, i, j).ok());
                    }
                }
            }
        }
        (InferenceRule::ReflexivityResolution, &[c]) => {
            for i in 0..c.len() {
                out.extend(reflexivity_resolution(c, i).ok());
            }
        }
        _ => {}
    }
    out
}

/// True if `clause` is a variant of something its cited rule derives from its
/// cited parents.
pub fn replays(clause: &Clause, parents: &[&Clause]) -> bool {
    let Some(Inference { rule, .. }) = &clause.inference else {
        return false;
    };
    let target = normalized_signature(clause);
    all_conclusions(*rule, parents)
        .iter()
        .any(|c| normalized_signature(c) == target)
}

/// Checks that every proof clause replays from its cited parents and that each
/// parent is in the proof or among the inputs.
pub fn check_proof(env: &SaturationEnv) -> Result<(), String> {
    let proof = env.proof_clauses().map_err(|e| e.to_string())?;
    let last = proof.last().ok_or("empty proof")?;
    if !last.is_empty() {
        return Err(format!("proof ends in {last}"));
    }
    let in_proof: BTreeSet<&str> = proof.iter().map(|c| c.label.as_str()).collect();
    for clause in &proof {
        if clause.inference.is_none() {
            if proof.len() == 1 {
                continue;
            }
            return Err(format!("input clause {} listed as derived", clause.label));
        }
        let mut parents = Vec::new();
        for label in clause.parents() {
            let parent = env
                .clause_by_label(label)
                .ok_or_else(|| format!("unknown parent {label}"))?;
            if parent.inference.is_some() && !in_proof.contains(label.as_str()) {
                return Err(format!(
                    "{} cites {label}, which is missing from the proof",
                    clause.label
                ));
            }
            if parent.birth_step >= clause.birth_step && parent.inference.is_some() {
                return Err(format!("{} cites the younger clause {label}", clause.label));
            }
            parents.push(parent);
        }
        let refs: Vec<&Clause> = parents.iter().map(|p| p.as_ref()).collect();
        if !replays(clause, &refs) {
            return Err(format!("{} does not replay from {:?}", clause.label, clause.parents()));
        }
    }
    Ok(())
}

/// Drives one episode with a heuristic agent, returning every step result.
pub fn drive(path: &std::path::Path, kind: AgentKind, step_limit: u64) -> (SaturationEnv, Vec<StepResult>) {
    let mut env = SaturationEnv::new(EnvConfig::new(vec![ProblemSource::new(path)], step_limit).unwrap()).unwrap();
    let mut observation = env.reset(0).unwrap();
    let agent = AgentSpec::new(kind);
    let mut results = Vec::new();
    loop {
        let Ok(action) = agent.select(&observation) else { break };
        let r = env.step(action).unwrap();
        observation = r.observation.clone();
        let done = r.done;
        results.push(r);
        if done {
            break;
        }
    }
    (env, results)
}

// ---------------------------------------------------------------------------
// Generators.

pub fn arb_variable() -> impl Strategy<Value = Term> {
    prop::sample::select(vec!["X", "Y", "Z", "W", "X0", "Y_1"]).prop_map(Term::var)
}

pub fn arb_term(depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        arb_variable(),
        prop::sample::select(vec!["a", "b", "c", "socrates", "Big one", "$x", "42"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(depth, 24, 3, |inner| {
        (
            prop::sample::select(vec!["f", "g", "h", "odd name"]),
            prop::collection::vec(inner, 1..=3),
        )
            .prop_map(|(f, args)| Term::app(f, args))
    })
    .boxed()
}

pub fn arb_atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (
            prop::sample::select(vec!["p", "q", "mortal", "has space"]),
            prop::collection::vec(arb_term(2), 0..=3)
        )
            .prop_map(|(p, args)| Atom::new(p, args)),
        (arb_term(2), arb_term(2)).prop_map(|(l, r)| Atom::equality(l, r)),
    ]
}

pub fn arb_literal() -> impl Strategy<Value = Literal> {
    (any::<bool>(), arb_atom()).prop_map(|(negated, atom)| Literal { negated, atom })
}

pub fn arb_role() -> impl Strategy<Value = Role> {
    prop::sample::select(Role::ALL.to_vec())
}

/// Clauses as an environment might hold them, including generated ones.
pub fn arb_clause() -> impl Strategy<Value = Clause> {
    (
        prop::collection::vec(arb_literal(), 0..=4),
        prop::sample::select(vec!["a2", "p_imp_q", "_17", "c1"]),
        arb_role(),
        prop::option::of((
            prop::sample::select(InferenceRule::ALL.to_vec()),
            prop::collection::vec(prop::sample::select(vec!["p", "q", "_0", "_3"]), 1..=2),
        )),
        0i64..50,
        any::<bool>(),
    )
        .prop_map(|(literals, label, role, inference, step, processed)| {
            let mut c = Clause::input(label, role, literals);
            if let Some((rule, parents)) = inference {
                c.inference = Some(Inference {
                    rule,
                    parents: parents.into_iter().map(String::from).collect(),
                });
                c.birth_step = step;
            }
            c.processed = processed;
            c
        })
}

// ---------------------------------------------------------------------------
// Unification micro-universe: constants a, b; f/1, g/2; height <= 2; at most
// three variables. Any unifiable pair has a ground unifier of height <= 2
// (at most two compound bindings chain below a root of height 2), so
// enumerating those is a complete oracle.

pub const MICRO_VARS: [&str; 3] = ["X", "Y", "Z"];

pub fn micro_term(height: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        prop::sample::select(MICRO_VARS.to_vec()).prop_map(Term::var),
        prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
    ];
    if height == 0 {
        return leaf.boxed();
    }
    let inner = micro_term(height - 1);
    prop_oneof![
        2 => leaf,
        1 => inner.clone().prop_map(|t| Term::app("f", vec![t])),
        2 => (inner.clone(), inner).prop_map(|(l, r)| Term::app("g", vec![l, r])),
    ]
    .boxed()
}

/// All ground terms of height <= `height` over the micro signature.
pub fn micro_ground_terms(height: u32) -> Vec<Term> {
    let mut terms = vec![Term::constant("a"), Term::constant("b")];
    for _ in 0..height {
        let prev = terms.clone();
        let mut next = vec![Term::constant("a"), Term::constant("b")];
        next.extend(prev.iter().map(|t| Term::app("f", vec![t.clone()])));
        for l in &prev {
            for r in &prev {
                next.push(Term::app("g", vec![l.clone(), r.clone()]));
            }
        }
        terms = next;
    }
    terms
}

/// Whether `s` and `t` can still be made equal: variables act as wildcards.
fn compatible(s: &Term, t: &Term) -> bool {
    match (s, t) {
        (Term::Variable(_), _) | (_, Term::Variable(_)) => true,
        (Term::Function { name: f, arguments: a }, Term::Function { name: g, arguments: b }) => {
            f == g && a.len() == b.len() && a.iter().zip(b).all(|(x, y)| compatible(x, y))
        }
    }
}

/// Every ground substitution into `universe` on the variables of `s`, `t`
/// that makes them equal.
pub fn ground_unifiers(s: &Term, t: &Term, universe: &[Term]) -> Vec<Substitution> {
    let mut vars: BTreeSet<String> = s.variables();
    vars.extend(t.variables());
    let vars: Vec<String> = vars.into_iter().collect();
    let mut found = Vec::new();
    fn dfs(
        s: &Term,
        t: &Term,
        vars: &[String],
        universe: &[Term],
        current: &mut Vec<(String, Term)>,
        found: &mut Vec<Substitution>,
    ) {
        let theta = Substitution::from_pairs(current.iter().cloned());
        let (s1, t1) = (
            saturate::apply_substitution(&theta, s),
            saturate::apply_substitution(&theta, t),
        );
        if !compatible(&s1, &t1) {
            return;
        }
        if current.len() == vars.len() {
            if s1 == t1 {
                found.push(theta);
            }
            return;
        }
        let v = vars[current.len()].clone();
        for g in universe {
            current.push((v.clone(), g.clone()));
            dfs(s, t, vars, universe, current, found);
            current.pop();
        }
    }
    dfs(s, t, &vars, universe, &mut Vec::new(), &mut found);
    found
}

/// A pair unifiable by construction: a term and a renamed-apart instance of it.
pub fn unifiable_pair() -> impl Strategy<Value = (Term, Term)> {
    (arb_term(3), prop::collection::vec(arb_term(1), 3)).prop_map(|(t, images)| {
        let vars: Vec<String> = t.variables().into_iter().collect();
        let s = Substitution::from_pairs(vars.iter().zip(images).map(|(v, image)| (v.clone(), image)));
        let instance = saturate::apply_substitution(&s, &t);
        let wrapped = Clause::input(
            "c",
            Role::Axiom,
            vec![Literal::positive(Atom::new("p", vec![instance]))],
        );
        let fresh = rename_apart(&wrapped, &t.variables());
        (t, fresh.literals[0].atom.arguments[0].clone())
    })
}
