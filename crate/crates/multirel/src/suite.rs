//! The self-test suite: eleven numbered criteria covering the demos, the
//! inner algebra, closures, lifts, quotients, special-class orders,
//! decompositions, co-composition, the basis law files, and the search
//! engine. Each criterion reports pass/fail with failure details.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::closures::{
    self, antisymmetric_on, class_order_report, closed_check, closure, decompose_full,
    preorder_leq, quotient, reconstruct_univalent, ClosureKind, PreorderKind,
};
use crate::demos;
use crate::error::Result;
use crate::finsets::{ObjType, Universe};
use crate::lawlab::{parse_law_file, run_law, CheckOptions, Mode, SearchGoal, Verdict};
use crate::mrcore::{
    self, co_compose, inner_complement, inner_intersection, inner_union, inner_unit_i,
    inner_unit_u, kleisli_lift, membership, omega, peleg_compose, peleg_lift, unit,
    InnerProperty,
};
use crate::relcore::{
    self, const_relation, converse, d_subfunctions, domain, intersection, is_subset,
    rel_property, union, ConstKind, RelProperty, Relation,
};

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: Vec<String>,
    pub elapsed_ms: u128,
}

impl CriterionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "criterion": self.id,
            "name": self.name,
            "pass": self.pass,
            "detail": self.detail,
            "elapsed_ms": self.elapsed_ms as u64,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "criterion {:2} {:<20} {} ({} ms)",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.elapsed_ms
        );
        for line in &self.detail {
            out.push_str(&format!("\n    {line}"));
        }
        out
    }
}

#[derive(Default)]
struct Check {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn claim(&mut self, label: &str, ok: bool) {
        if !ok {
            self.failed.push(format!("FAIL {label}"));
        }
    }

    fn count(&mut self, label: &str, failures: usize, total: usize) {
        if failures == 0 {
            self.notes.push(format!("{label}: {total} cases"));
        } else {
            self.failed
                .push(format!("FAIL {label}: {failures} of {total} cases"));
        }
    }

    fn note(&mut self, line: String) {
        self.notes.push(line);
    }
}

fn base(name: &str) -> ObjType {
    ObjType::base(name)
}

fn all_mrels(u: &Universe, src: &ObjType, inner: &ObjType) -> Result<Vec<Relation>> {
    Ok(relcore::all_relations(u, src, &ObjType::pow(inner.clone()), 24)?.collect())
}

// ---------------------------------------------------------------- criterion 1

fn c1_demos(c: &mut Check) -> Result<()> {
    for name in demos::DEMO_NAMES {
        let t = Instant::now();
        let report = demos::run_demo(name)?;
        let ms = t.elapsed().as_millis();
        c.claim(&format!("demo {name} reproduces its expected values"), report.pass);
        c.claim(&format!("demo {name} under 1s"), ms < 1000);
    }
    c.note(format!("replayed {} demos", demos::DEMO_NAMES.len()));
    Ok(())
}

// ---------------------------------------------------------------- criterion 2

fn c2_inner_semilattice(c: &mut Check) -> Result<()> {
    let u = Universe::declare(&[("X", 1), ("Y", 2)])?;
    let (x, y) = (base("X"), base("Y"));
    let all = all_mrels(&u, &x, &y)?;
    let lu = inner_unit_u(&u, &x, &y)?;
    let li = inner_unit_i(&u, &x, &y)?;

    let mut bad = 0usize;
    for r in &all {
        for s in &all {
            for t in &all {
                let ok = inner_union(&inner_union(r, s)?, t)? == inner_union(r, &inner_union(s, t)?)?
                    && inner_intersection(&inner_intersection(r, s)?, t)?
                        == inner_intersection(r, &inner_intersection(s, t)?)?;
                if !ok {
                    bad += 1;
                }
            }
        }
    }
    c.count("icup/icap associativity", bad, all.len().pow(3));

    bad = 0;
    for r in &all {
        for s in &all {
            let ok = inner_union(r, s)? == inner_union(s, r)?
                && inner_intersection(r, s)? == inner_intersection(s, r)?;
            if !ok {
                bad += 1;
            }
        }
        let units = inner_union(r, &lu)? == *r && inner_intersection(r, &li)? == *r;
        if !units {
            bad += 1;
        }
    }
    c.count("icup/icap commutativity and units", bad, all.len() * all.len());

    // inner complement is a de Morgan isomorphism between the two semilattices
    bad = 0;
    for r in &all {
        for s in &all {
            let ok = inner_complement(&inner_union(r, s)?)?
                == inner_intersection(&inner_complement(r)?, &inner_complement(s)?)?
                && inner_complement(&inner_intersection(r, s)?)?
                    == inner_union(&inner_complement(r)?, &inner_complement(s)?)?;
            if !ok {
                bad += 1;
            }
        }
        if inner_complement(&inner_complement(r)?)? != *r {
            bad += 1;
        }
    }
    c.count("inner complement de Morgan isomorphism", bad, all.len() * all.len());
    c.claim("lu^i = li", inner_complement(&lu)? == li);

    // both inner operations preserve outer unions in each argument;
    // families of size <= 2 exhaustively
    bad = 0;
    for r in &all {
        for s1 in &all {
            for s2 in &all {
                let joined = union(s1, s2)?;
                let ok = inner_union(r, &joined)?
                    == union(&inner_union(r, s1)?, &inner_union(r, s2)?)?
                    && inner_union(&joined, r)?
                        == union(&inner_union(s1, r)?, &inner_union(s2, r)?)?
                    && inner_intersection(r, &joined)?
                        == union(&inner_intersection(r, s1)?, &inner_intersection(r, s2)?)?;
                if !ok {
                    bad += 1;
                }
            }
        }
    }
    c.count("union preservation, families of size <= 2", bad, all.len().pow(3));

    // and on 1000 seeded random families of size 1..=4
    let mut rng = ChaCha8Rng::seed_from_u64(0x0326);
    bad = 0;
    for _ in 0..1000 {
        let r = &all[rng.gen_range(0..all.len())];
        let k = rng.gen_range(1..=4usize);
        let family: Vec<&Relation> = (0..k).map(|_| &all[rng.gen_range(0..all.len())]).collect();
        let mut joined = family[0].clone();
        for s in &family[1..] {
            joined = union(&joined, s)?;
        }
        let mut lhs_u = inner_union(r, family[0])?;
        let mut lhs_i = inner_intersection(r, family[0])?;
        for s in &family[1..] {
            lhs_u = union(&lhs_u, &inner_union(r, s)?)?;
            lhs_i = union(&lhs_i, &inner_intersection(r, s)?)?;
        }
        if inner_union(r, &joined)? != lhs_u || inner_intersection(r, &joined)? != lhs_i {
            bad += 1;
        }
    }
    c.count("union preservation, 1000 random families (seed 0x0326)", bad, 1000);
    Ok(())
}

// ---------------------------------------------------------------- criterion 3

fn c3_closures(c: &mut Check) -> Result<()> {
    let u = Universe::declare(&[("X", 2), ("Y", 2)])?;
    let (x, y) = (base("X"), base("Y"));
    let all = all_mrels(&u, &x, &y)?;
    let downs: Vec<Relation> = all
        .iter()
        .map(|r| closure(&u, ClosureKind::Down, r))
        .collect::<Result<_>>()?;
    let ups: Vec<Relation> = all
        .iter()
        .map(|r| closure(&u, ClosureKind::Up, r))
        .collect::<Result<_>>()?;
    let up_closed: Vec<bool> = all.iter().zip(&ups).map(|(r, c)| r == c).collect();
    let down_closed: Vec<bool> = all.iter().zip(&downs).map(|(r, c)| r == c).collect();

    let mut bad = 0usize;
    let mut bad_meet = 0usize;
    for (i, r) in all.iter().enumerate() {
        for (j, s) in all.iter().enumerate() {
            if closure(&u, ClosureKind::Down, &inner_union(r, s)?)?
                != inner_union(&downs[i], &downs[j])?
                || closure(&u, ClosureKind::Up, &inner_intersection(r, s)?)?
                    != inner_intersection(&ups[i], &ups[j])?
            {
                bad += 1;
            }
            if up_closed[i] && up_closed[j] && inner_union(r, s)? != intersection(r, s)? {
                bad_meet += 1;
            }
            if down_closed[i] && down_closed[j] && inner_intersection(r, s)? != intersection(r, s)?
            {
                bad_meet += 1;
            }
        }
    }
    c.count("closure distribution over icup/icap", bad, all.len() * all.len());
    c.count("inner ops are meets on closed classes", bad_meet, all.len() * all.len());

    let univ = const_relation(ConstKind::Universal, &u, x.clone(), ObjType::pow(y.clone()))?;
    c.claim(
        "down(li) = U",
        closure(&u, ClosureKind::Down, &inner_unit_i(&u, &x, &y)?)? == univ,
    );
    c.claim(
        "up(lu) = U",
        closure(&u, ClosureKind::Up, &inner_unit_u(&u, &x, &y)?)? == univ,
    );

    // closed classes are intersection-closed, so the closures form closure
    // systems; 1000 seeded random families
    let mut rng = ChaCha8Rng::seed_from_u64(0x0403);
    let mut bad_fam = 0usize;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=4usize);
        let mut meet_up: Option<Relation> = None;
        let mut meet_down: Option<Relation> = None;
        let mut meet_conv: Option<Relation> = None;
        for _ in 0..k {
            let i = rng.gen_range(0..all.len());
            let conv = closure(&u, ClosureKind::Convex, &all[i])?;
            meet_up = Some(match meet_up {
                None => ups[i].clone(),
                Some(m) => intersection(&m, &ups[i])?,
            });
            meet_down = Some(match meet_down {
                None => downs[i].clone(),
                Some(m) => intersection(&m, &downs[i])?,
            });
            meet_conv = Some(match meet_conv {
                None => conv,
                Some(m) => intersection(&m, &conv)?,
            });
        }
        let ok = closed_check(&u, ClosureKind::Up, &meet_up.unwrap())?
            && closed_check(&u, ClosureKind::Down, &meet_down.unwrap())?
            && closed_check(&u, ClosureKind::Convex, &meet_conv.unwrap())?;
        if !ok {
            bad_fam += 1;
        }
    }
    c.count(
        "closed classes intersection-closed, 1000 random families (seed 0x0403)",
        bad_fam,
        1000,
    );
    Ok(())
}

// ---------------------------------------------------------------- criterion 4

fn c4_lifts(c: &mut Check) -> Result<()> {
    for card in 1..=3usize {
        let u = Universe::declare(&[("Y", card)])?;
        let y = base("Y");
        let down_one = closure(&u, ClosureKind::Down, &unit(&u, &y)?)?;
        c.claim(
            &format!("plift(down(one)) = Om^ at |Y| = {card}"),
            peleg_lift(&u, &down_one)? == converse(&omega(&u, &y)?),
        );
    }

    let u = Universe::declare(&[("X", 1), ("Y", 2)])?;
    let (x, y) = (base("X"), base("Y"));
    let down_one = closure(&u, ClosureKind::Down, &unit(&u, &y)?)?;
    let all = all_mrels(&u, &x, &y)?;
    let mut bad = 0usize;
    for r in &all {
        if closure(&u, ClosureKind::Down, r)? != peleg_compose(&u, r, &down_one)? {
            bad += 1;
        }
    }
    c.count("down(R) = R * down(one)", bad, all.len());

    // for deterministic R the choice function is unique, so both lifts agree
    let mut bad_k = 0usize;
    let mut n_det = 0usize;
    for r in &all {
        if !rel_property(RelProperty::Deterministic, r) {
            continue;
        }
        n_det += 1;
        if kleisli_lift(&u, r)? != peleg_lift(&u, r)? {
            bad_k += 1;
        }
    }
    c.count("klift(R) = plift(R) for deterministic R", bad_k, n_det);
    Ok(())
}

// ---------------------------------------------------------------- criterion 5

fn c5_closure_composition(c: &mut Check) -> Result<()> {
    for xcard in 1..=2usize {
        let u = Universe::declare(&[("X", xcard), ("Y", 2)])?;
        let (x, y) = (base("X"), base("Y"));
        let eps_x = membership(&u, &x)?;
        let eps_y = membership(&u, &y)?;
        let lu_yy = inner_unit_u(&u, &y, &y)?;
        let rs = all_mrels(&u, &x, &y)?;
        let ss = all_mrels(&u, &y, &y)?;

        let mut bad_up = 0usize;
        let mut bad_tot = 0usize;
        for r in &rs {
            let up = closure(&u, ClosureKind::Up, r)?;
            if peleg_compose(&u, &eps_x, &up)? != up {
                bad_up += 1;
            }
            if mrcore::inner_property(&u, InnerProperty::InnerTotal, r)?
                && up != peleg_compose(&u, r, &eps_y)?
            {
                bad_tot += 1;
            }
        }
        c.count(&format!("eps * up(R) = up(R) at |X| = {xcard}"), bad_up, rs.len());
        c.count(
            &format!("up(R) = R * eps for inner-total R at |X| = {xcard}"),
            bad_tot,
            rs.len(),
        );

        let mut bad_down = 0usize;
        let mut bad_lu = 0usize;
        let mut bad_det = 0usize;
        for r in &rs {
            let r_det = mrcore::inner_property(&u, InnerProperty::InnerDeterministic, r)?;
            let down_r = closure(&u, ClosureKind::Down, r)?;
            let up_r = closure(&u, ClosureKind::Up, r)?;
            for s in &ss {
                let comp = peleg_compose(&u, r, s)?;
                if closure(&u, ClosureKind::Down, &comp)?
                    != peleg_compose(&u, r, &closure(&u, ClosureKind::Down, s)?)?
                {
                    bad_down += 1;
                }
                if peleg_compose(&u, &down_r, s)? != peleg_compose(&u, r, &union(&lu_yy, s)?)? {
                    bad_lu += 1;
                }
                if r_det {
                    let up_comp = closure(&u, ClosureKind::Up, &comp)?;
                    let up_s = closure(&u, ClosureKind::Up, s)?;
                    if up_comp != peleg_compose(&u, r, &up_s)?
                        || up_comp != peleg_compose(&u, &up_r, &up_s)?
                    {
                        bad_det += 1;
                    }
                }
            }
        }
        let pairs = rs.len() * ss.len();
        c.count(&format!("down(R * S) = R * down(S) at |X| = {xcard}"), bad_down, pairs);
        c.count(
            &format!("down(R) * S = R * (lu cup S) at |X| = {xcard}"),
            bad_lu,
            pairs,
        );
        c.count(
            &format!("up-distribution for inner-deterministic R at |X| = {xcard}"),
            bad_det,
            pairs,
        );
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 6

fn c6_quotients(c: &mut Check) -> Result<()> {
    let u = Universe::declare(&[("X", 1), ("Y", 2)])?;
    let (x, y) = (base("X"), base("Y"));
    let all = all_mrels(&u, &x, &y)?;
    let lu = inner_unit_u(&u, &x, &y)?;

    let qh = quotient(&u, PreorderKind::Hoare, &x, &y, 24)?;
    c.claim("Hoare quotient has 6 classes", qh.classes.len() == 6);
    c.claim(
        "Hoare classes partition all 16 multirelations",
        qh.classes.iter().map(|cl| cl.members.len()).sum::<usize>() == all.len(),
    );
    let mut reps_down_closed = true;
    for cl in &qh.classes {
        reps_down_closed &= closed_check(&u, ClosureKind::Down, &cl.representative)?;
    }
    c.claim("Hoare representatives are the down-closed multirelations", reps_down_closed);
    let mut n_down_closed = 0usize;
    for r in &all {
        if closed_check(&u, ClosureKind::Down, r)? {
            n_down_closed += 1;
        }
    }
    c.claim("exactly 6 down-closed multirelations", n_down_closed == 6);

    // the quotient is a semilattice with unit [lu], isomorphic to the
    // down-closed multirelations under icup with inclusion as its order
    let reps: Vec<&Relation> = qh.classes.iter().map(|cl| &cl.representative).collect();
    let mut bad = 0usize;
    for p in &reps {
        for q in &reps {
            let join = inner_union(p, q)?;
            let ok = closed_check(&u, ClosureKind::Down, &join)?
                && (preorder_leq(&u, PreorderKind::Hoare, p, q)? == is_subset(p, q)?);
            if !ok {
                bad += 1;
            }
        }
        if inner_union(p, &lu)? != **p {
            bad += 1;
        }
    }
    c.count("representatives form an ordered semilattice with unit [lu]", bad, 36);

    // the quotient map is a homomorphism: the class of r icup s is the icup
    // of the class representatives
    bad = 0;
    for cl_r in &qh.classes {
        for cl_s in &qh.classes {
            for r in &cl_r.members {
                for s in &cl_s.members {
                    if closure(&u, ClosureKind::Down, &inner_union(r, s)?)?
                        != inner_union(&cl_r.representative, &cl_s.representative)?
                    {
                        bad += 1;
                    }
                }
            }
        }
    }
    c.count("quotient map is an icup homomorphism", bad, all.len() * all.len());

    // inner complement transports the Hoare quotient onto the Smyth quotient
    let qs = quotient(&u, PreorderKind::Smyth, &x, &y, 24)?;
    c.claim("Smyth quotient has 6 classes", qs.classes.len() == 6);
    let mut smyth_reps: Vec<Relation> = qs.classes.iter().map(|cl| cl.representative.clone()).collect();
    let mut mapped: Vec<Relation> = reps
        .iter()
        .map(|p| inner_complement(p))
        .collect::<Result<_>>()?;
    smyth_reps.sort_by_key(Relation::encoding);
    mapped.sort_by_key(Relation::encoding);
    c.claim("icpl maps Hoare representatives onto Smyth representatives", smyth_reps == mapped);

    // Egli-Milner classes are exactly the convex-closed multirelations
    let qem = quotient(&u, PreorderKind::EgliMilner, &x, &y, 24)?;
    let mut n_convex = 0usize;
    for r in &all {
        if closed_check(&u, ClosureKind::Convex, r)? {
            n_convex += 1;
        }
    }
    c.claim(
        "Egli-Milner representatives are the convex-closed multirelations",
        qem.classes.len() == n_convex,
    );
    let mut em_ok = true;
    for cl in &qem.classes {
        for m in &cl.members {
            em_ok &= closure(&u, ClosureKind::Convex, m)? == cl.representative;
        }
    }
    c.claim("every member convex-closes to its representative", em_ok);
    Ok(())
}

// ---------------------------------------------------------------- criterion 7

fn c7_class_orders(c: &mut Check) -> Result<()> {
    let u = Universe::declare(&[("X", 2), ("Y", 2)])?;
    let (x, y) = (base("X"), base("Y"));
    let all = all_mrels(&u, &x, &y)?;

    let dets: Vec<Relation> = all
        .iter()
        .filter(|r| rel_property(RelProperty::Deterministic, r))
        .cloned()
        .collect();
    c.claim("16 deterministic multirelations", dets.len() == 16);
    let report = class_order_report(&u, &dets)?;
    c.claim("preorders coincide on the deterministic class", report.coincide);
    c.claim("icup/icap absorb on the deterministic class", report.absorption);
    c.claim("the deterministic class is partially ordered", report.antisymmetric);

    let univalents: Vec<Relation> = all
        .iter()
        .filter(|r| rel_property(RelProperty::Univalent, r))
        .cloned()
        .collect();
    c.claim("25 univalent multirelations", univalents.len() == 25);
    for kind in [PreorderKind::Hoare, PreorderKind::Smyth, PreorderKind::EgliMilner] {
        c.claim(
            &format!("{} antisymmetric on the univalent class", kind.name()),
            antisymmetric_on(&u, kind, &univalents)?.is_none(),
        );
    }

    // expected-fail controls: antisymmetry breaks on the inner-univalent
    // class and on the full class
    let mut inner_univ: Vec<Relation> = Vec::new();
    for r in &all {
        if mrcore::inner_property(&u, InnerProperty::InnerUnivalent, r)? {
            inner_univ.push(r.clone());
        }
    }
    c.claim(
        "Hoare not antisymmetric on the inner-univalent class",
        antisymmetric_on(&u, PreorderKind::Hoare, &inner_univ)?.is_some(),
    );
    c.claim(
        "Smyth not antisymmetric on the inner-univalent class",
        antisymmetric_on(&u, PreorderKind::Smyth, &inner_univ)?.is_some(),
    );
    c.claim(
        "Hoare not antisymmetric on the full class",
        antisymmetric_on(&u, PreorderKind::Hoare, &all)?.is_some(),
    );

    // the equivalent-but-unequal witnesses behind those failures
    let u3 = Universe::declare(&[("X", 3)])?;
    let x3 = base("X");
    let t3 = ObjType::pow(x3.clone());
    let r3 = Relation::new(&u3, x3.clone(), t3.clone(), vec![(0, 0b001), (0, 0b111)])?;
    let s3 = union(&r3, &Relation::new(&u3, x3.clone(), t3, vec![(0, 0b011)])?)?;
    c.claim(
        "three-element control: equivalent in all three preorders yet unequal",
        closures::equiv(&u3, PreorderKind::Hoare, &r3, &s3)?
            && closures::equiv(&u3, PreorderKind::Smyth, &r3, &s3)?
            && closures::equiv(&u3, PreorderKind::EgliMilner, &r3, &s3)?
            && r3 != s3,
    );
    let u1 = Universe::declare(&[("X", 1)])?;
    let x1 = base("X");
    let one1 = unit(&u1, &x1)?;
    let univ1 = const_relation(ConstKind::Universal, &u1, x1.clone(), ObjType::pow(x1))?;
    c.claim(
        "one-element control: one and U are Hoare equivalent yet unequal",
        antisymmetric_on(&u1, PreorderKind::Hoare, &[one1.clone(), univ1.clone()])?.is_some()
            && one1 != univ1,
    );
    Ok(())
}

// ---------------------------------------------------------------- criterion 8

fn c8_decomposition(c: &mut Check) -> Result<()> {
    let u = Universe::declare(&[("X", 2), ("Y", 2)])?;
    let (x, y) = (base("X"), base("Y"));

    // plain relations decompose into their domain-preserving subfunctions
    let rels: Vec<Relation> = relcore::all_relations(&u, &x, &y, 24)?.collect();
    let mut bad = 0usize;
    for r in &rels {
        let family = d_subfunctions(r)?;
        let mut rebuilt = const_relation(ConstKind::Empty, &u, x.clone(), y.clone())?;
        let mut ok = true;
        for f in &family {
            ok &= rel_property(RelProperty::Univalent, f)
                && domain(f) == domain(r)
                && is_subset(f, r)?;
            rebuilt = union(&rebuilt, f)?;
        }
        if !ok || rebuilt != *r {
            bad += 1;
        }
    }
    c.count("relations are unions of their subfunctions", bad, rels.len());

    // the multirelational decomposition theorem over all 256 multirelations
    let all = all_mrels(&u, &x, &y)?;
    let mut bad_dec = 0usize;
    let mut bad_uni = 0usize;
    let mut n_univalent = 0usize;
    for r in &all {
        if !decompose_full(&u, r)? {
            bad_dec += 1;
        }
        if rel_property(RelProperty::Univalent, r) {
            n_univalent += 1;
            if reconstruct_univalent(&u, r)? != *r {
                bad_uni += 1;
            }
        }
    }
    c.count("univalent subrelations reconstruct", bad_dec, all.len());
    c.count("univalent multirelations round-trip", bad_uni, n_univalent);
    c.note(format!("{n_univalent} univalent multirelations"));
    Ok(())
}

// ---------------------------------------------------------------- criterion 9

/// Exhaustive co-composition identities at |X| = 1, |Y| = 2 on encodings:
/// multirelations X <-> P(Y) are 4-bit numbers, Y <-> P(Y) are 8-bit
/// numbers, so subset checks on precomputed tables are bit tests.
fn c9_co_composition(c: &mut Check) -> Result<()> {
    let u = Universe::declare(&[("X", 1), ("Y", 2)])?;
    let (x, y) = (base("X"), base("Y"));
    let rs = all_mrels(&u, &x, &y)?; // 16
    let ss = all_mrels(&u, &y, &y)?; // 256
    let one_y = unit(&u, &y)?;
    let one_i = inner_complement(&one_y)?;
    let lu_yy = inner_unit_u(&u, &y, &y)?;
    let li_yy = inner_unit_i(&u, &y, &y)?;
    let empty_x = const_relation(ConstKind::Empty, &u, x.clone(), ObjType::pow(y.clone()))?;
    let empty_y = const_relation(ConstKind::Empty, &u, y.clone(), ObjType::pow(y.clone()))?;

    c.claim("one^i @ one^i = one", co_compose(&u, &one_i, &one_i)? == one_y);
    c.claim(
        "lu @ R = li for all R, here at R = 0",
        co_compose(&u, &lu_yy, &empty_y)? == li_yy,
    );

    // unary sweeps over R : X <-> P(Y)
    let mut bad = 0usize;
    for r in &rs {
        let ri = inner_complement(r)?;
        let ok = co_compose(&u, r, &one_i)? == ri
            && co_compose(&u, r, &lu_yy)? == inner_complement(&peleg_compose(&u, r, &li_yy)?)?
            && co_compose(&u, r, &li_yy)? == inner_complement(&peleg_compose(&u, r, &lu_yy)?)?
            && is_subset(&peleg_compose(&u, r, &lu_yy)?, &inner_intersection(r, &ri)?)?
            && is_subset(&co_compose(&u, r, &li_yy)?, &inner_union(r, &ri)?)?;
        if !ok {
            bad += 1;
        }
    }
    c.count("unit and complement interaction laws", bad, rs.len());

    // left unit, left zero, and the exact shape of R @ 0
    bad = 0;
    for s in &ss {
        let restricted: Vec<(usize, usize)> = s
            .pairs()
            .iter()
            .filter(|&&(_, b)| b == 0)
            .map(|&(a, _)| (a, 3))
            .collect();
        let expect_zero = Relation::new(&u, y.clone(), ObjType::pow(y.clone()), restricted)?;
        let ok = co_compose(&u, &one_y, s)? == *s
            && co_compose(&u, &empty_x, s)?.is_empty()
            && co_compose(&u, &lu_yy, s)? == li_yy
            && co_compose(&u, s, &empty_y)? == expect_zero;
        if !ok {
            bad += 1;
        }
    }
    c.count("left unit, left zero, and R @ 0 image", bad, ss.len());

    // table-driven exhaustive sweep: co[r][s] as encodings
    let co: Vec<Vec<u16>> = rs
        .iter()
        .map(|r| {
            ss.iter()
                .map(|s| Ok(co_compose(&u, r, s)?.encoding() as u16))
                .collect::<Result<Vec<u16>>>()
        })
        .collect::<Result<_>>()?;
    let star: Vec<Vec<u16>> = rs
        .iter()
        .map(|r| {
            ss.iter()
                .map(|s| Ok(peleg_compose(&u, r, s)?.encoding() as u16))
                .collect::<Result<Vec<u16>>>()
        })
        .collect::<Result<_>>()?;
    let icpl_s: Vec<usize> = ss
        .iter()
        .map(|s| Ok(inner_complement(s)?.encoding() as usize))
        .collect::<Result<_>>()?;
    let icap_s: Vec<Vec<usize>> = ss
        .iter()
        .map(|s| {
            ss.iter()
                .map(|t| Ok(inner_intersection(s, t)?.encoding() as usize))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<_>>()?;
    let icpl_r: Vec<usize> = rs
        .iter()
        .map(|r| Ok(inner_complement(r)?.encoding() as usize))
        .collect::<Result<_>>()?;
    let icup_r: Vec<Vec<usize>> = rs
        .iter()
        .map(|r| {
            rs.iter()
                .map(|q| Ok(inner_union(r, q)?.encoding() as usize))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<_>>()?;
    let icap_r: Vec<Vec<u16>> = rs
        .iter()
        .map(|r| {
            rs.iter()
                .map(|q| Ok(inner_intersection(r, q)?.encoding() as u16))
                .collect::<Result<Vec<u16>>>()
        })
        .collect::<Result<_>>()?;

    // R * S = (R @ S^i)^i, exhaustively
    bad = 0;
    for ri in 0..rs.len() {
        for si in 0..ss.len() {
            if icpl_r[co[ri][icpl_s[si]] as usize] as u16 != star[ri][si] {
                bad += 1;
            }
        }
    }
    c.count("R * S = (R @ S^i)^i", bad, rs.len() * ss.len());

    // distribution and monotonicity laws over all triples
    let subset = |a: u16, b: u16| a & !b == 0;
    bad = 0;
    let mut bad_eq = 0usize;
    for ri in 0..rs.len() {
        for qi in 0..rs.len() {
            for ti in 0..ss.len() {
                // (R cup Q) @ T = (R @ T) cup (Q @ T)
                let joined = (rs[ri].encoding() | rs[qi].encoding()) as u16;
                let ji = joined as usize;
                if co[ji][ti] != co[ri][ti] | co[qi][ti] {
                    bad += 1;
                }
                // (R icup Q) @ T <= (R @ T) icap (Q @ T), equality for
                // inner-intersection-closed T
                let lhs = co[icup_r[ri][qi]][ti];
                let rhs_pair =
                    icap_r[co[ri][ti] as usize][co[qi][ti] as usize];
                if !subset(lhs, rhs_pair) {
                    bad += 1;
                }
                if subset(icap_s[ti][ti] as u16, ss[ti].encoding() as u16) && lhs != rhs_pair {
                    bad_eq += 1;
                }
            }
        }
    }
    c.count(
        "first-argument distribution laws",
        bad,
        rs.len() * rs.len() * ss.len(),
    );
    c.count(
        "icup distribution equality for icap-closed T",
        bad_eq,
        rs.len() * rs.len() * ss.len(),
    );

    bad = 0;
    for ri in 0..rs.len() {
        for si in 0..ss.len() {
            for ti in 0..ss.len() {
                // R @ (S icap T) <= (R @ S) icap (R @ T)
                if !subset(
                    co[ri][icap_s[si][ti]],
                    icap_r[co[ri][si] as usize][co[ri][ti] as usize],
                ) {
                    bad += 1;
                }
                // monotone in the second argument
                if subset(ss[si].encoding() as u16, ss[ti].encoding() as u16)
                    && !subset(co[ri][si], co[ri][ti])
                {
                    bad += 1;
                }
            }
        }
    }
    c.count(
        "second-argument distribution and monotonicity",
        bad,
        rs.len() * ss.len() * ss.len(),
    );

    // seeded samples at |X| = |Y| = 2
    let u2 = Universe::declare(&[("X", 2), ("Y", 2)])?;
    let (x2, y2) = (base("X"), base("Y"));
    let pxy = ObjType::pow(y2.clone());
    let pyy = ObjType::pow(y2.clone());
    let one2 = unit(&u2, &y2)?;
    let one2_i = inner_complement(&one2)?;
    let lu2 = inner_unit_u(&u2, &y2, &y2)?;
    let li2 = inner_unit_i(&u2, &y2, &y2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0601);
    let mut bad_s = 0usize;
    for _ in 0..10_000 {
        let r = Relation::from_encoding(&u2, x2.clone(), pxy.clone(), rng.gen_range(0..256))?;
        let q = Relation::from_encoding(&u2, x2.clone(), pxy.clone(), rng.gen_range(0..256))?;
        let s = Relation::from_encoding(&u2, y2.clone(), pyy.clone(), rng.gen_range(0..256))?;
        let t = Relation::from_encoding(&u2, y2.clone(), pyy.clone(), rng.gen_range(0..256))?;
        let ok = peleg_compose(&u2, &r, &s)?
            == inner_complement(&co_compose(&u2, &r, &inner_complement(&s)?)?)?
            && co_compose(&u2, &r, &one2_i)? == inner_complement(&r)?
            && co_compose(&u2, &one2, &s)? == s
            && co_compose(&u2, &lu2, &s)? == li2
            && co_compose(&u2, &union(&r, &q)?, &s)?
                == union(&co_compose(&u2, &r, &s)?, &co_compose(&u2, &q, &s)?)?
            && is_subset(
                &co_compose(&u2, &inner_union(&r, &q)?, &s)?,
                &inner_intersection(&co_compose(&u2, &r, &s)?, &co_compose(&u2, &q, &s)?)?,
            )?
            && is_subset(
                &co_compose(&u2, &r, &inner_intersection(&s, &t)?)?,
                &inner_intersection(&co_compose(&u2, &r, &s)?, &co_compose(&u2, &r, &t)?)?,
            )?
            && (!is_subset(&s, &t)?
                || is_subset(&co_compose(&u2, &r, &s)?, &co_compose(&u2, &r, &t)?)?);
        if !ok {
            bad_s += 1;
        }
    }
    c.count("sampled identities at |X| = |Y| = 2 (seed 0x0601)", bad_s, 10_000);
    Ok(())
}

// --------------------------------------------------------------- criterion 10

fn run_law_file(c: &mut Check, name: &str, src: &str) -> Result<()> {
    let file = parse_law_file(src)?;
    let spec: Vec<(&str, usize)> = file.sets.iter().map(|(n, k)| (n.as_str(), *k)).collect();
    let u = Universe::declare(&spec)?;
    let opts = CheckOptions::default();
    let mut total_checked = 0u64;
    for law in &file.laws {
        let report = run_law(&u, &file, law, SearchGoal::Check, &opts)?;
        total_checked += report.checked;
        c.claim(&format!("{name}: {}", law.text), report.verdict == Verdict::Valid);
    }
    c.note(format!(
        "{name}: {} laws, {total_checked} assignments",
        file.laws.len()
    ));
    Ok(())
}

fn c10_basis_laws(c: &mut Check) -> Result<()> {
    run_law_file(c, "prop-3-2.law", include_str!("../../../laws/prop-3-2.law"))?;
    run_law_file(c, "basis-x1y2.law", include_str!("../../../laws/basis-x1y2.law"))?;
    run_law_file(c, "basis-x2y2.law", include_str!("../../../laws/basis-x2y2.law"))?;
    Ok(())
}

// --------------------------------------------------------------- criterion 11

fn c11_search(c: &mut Check) -> Result<()> {
    // minimal witness for non-idempotence of icup
    let t = Instant::now();
    let file = parse_law_file(include_str!("../../../laws/iu-not-idempotent.law"))?;
    let u = Universe::declare(&[("X", 1), ("Y", 2)])?;
    let opts = CheckOptions::default();
    let report = run_law(&u, &file, &file.laws[0], SearchGoal::Find, &opts)?;
    c.claim("icup non-idempotence witness found", report.verdict == Verdict::Witness);
    let expect = Relation::new(
        &u,
        base("X"),
        ObjType::pow(base("Y")),
        vec![(0, 1), (0, 2)],
    )?;
    c.claim(
        "witness is the canonical minimal one",
        report.binding.as_deref() == Some(&[("R".to_string(), expect)][..]),
    );
    c.claim("witness search under 1s", t.elapsed().as_millis() < 1000);

    // Peleg composition: weak associativity sampled, associativity refuted
    let src = "set X = 2\n\
               var R : X <-> P(X)\n\
               var S : X <-> P(X)\n\
               var T : X <-> P(X)\n\
               law (R * S) * T <= R * (S * T)\n\
               law (R * S) * T != R * (S * T)\n";
    let file = parse_law_file(src)?;
    let u2 = Universe::declare(&[("X", 2)])?;
    let sampled = CheckOptions {
        mode: Mode::Sample {
            samples: 100_000,
            seed: 0x517,
        },
        ..CheckOptions::default()
    };
    let weak = run_law(&u2, &file, &file.laws[0], SearchGoal::Check, &sampled)?;
    c.claim(
        "weak associativity holds on 100000 samples",
        weak.verdict == Verdict::SampledPass,
    );
    c.note(format!("weak associativity checked {} samples", weak.checked));

    let strict = run_law(&u2, &file, &file.laws[1], SearchGoal::Find, &sampled)?;
    c.claim(
        "associativity refuted by a sampled witness",
        strict.verdict == Verdict::Witness,
    );
    if let Some(binding) = &strict.binding {
        // independently confirm the witness outside the engine
        let get = |name: &str| {
            binding
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, r)| r.clone())
                .unwrap()
        };
        let (r, s, tt) = (get("R"), get("S"), get("T"));
        let lhs = peleg_compose(&u2, &peleg_compose(&u2, &r, &s)?, &tt)?;
        let rhs = peleg_compose(&u2, &r, &peleg_compose(&u2, &s, &tt)?)?;
        c.claim("witness confirmed outside the engine", lhs != rhs && is_subset(&lhs, &rhs)?);
    }

    // reports are byte-identical across worker counts (elapsed zeroed)
    let mut single = run_law(
        &u2,
        &file,
        &file.laws[0],
        SearchGoal::Check,
        &CheckOptions { jobs: 1, ..sampled },
    )?;
    let mut eight = run_law(
        &u2,
        &file,
        &file.laws[0],
        SearchGoal::Check,
        &CheckOptions { jobs: 8, ..sampled },
    )?;
    single.elapsed_ms = 0;
    eight.elapsed_ms = 0;
    c.claim(
        "identical reports for 1 and 8 workers",
        single.to_json(&u2)?.to_string() == eight.to_json(&u2)?.to_string(),
    );
    Ok(())
}

// ------------------------------------------------------------------- registry

type CriterionFn = fn(&mut Check) -> Result<()>;

pub const CRITERIA: [(usize, &str); 11] = [
    (1, "demos"),
    (2, "inner-semilattice"),
    (3, "closures"),
    (4, "lifts"),
    (5, "closure-composition"),
    (6, "quotients"),
    (7, "class-orders"),
    (8, "decomposition"),
    (9, "co-composition"),
    (10, "basis-laws"),
    (11, "search"),
];

fn criterion_fn(id: usize) -> CriterionFn {
    match id {
        1 => c1_demos,
        2 => c2_inner_semilattice,
        3 => c3_closures,
        4 => c4_lifts,
        5 => c5_closure_composition,
        6 => c6_quotients,
        7 => c7_class_orders,
        8 => c8_decomposition,
        9 => c9_co_composition,
        10 => c10_basis_laws,
        11 => c11_search,
        _ => unreachable!("criterion ids are 1..=11"),
    }
}

/// Runs the criteria whose name contains `filter` (all of them when `None`).
pub fn run_suite(filter: Option<&str>) -> Vec<CriterionReport> {
    let mut reports = Vec::new();
    for &(id, name) in CRITERIA.iter() {
        if let Some(f) = filter {
            if !name.contains(f) && f != id.to_string() {
                continue;
            }
        }
        let start = Instant::now();
        let mut check = Check::default();
        let outcome = criterion_fn(id)(&mut check);
        let mut detail = check.notes;
        detail.extend(check.failed.iter().cloned());
        let mut pass = check.failed.is_empty();
        if let Err(e) = outcome {
            pass = false;
            detail.push(format!("ERROR {e}"));
        }
        reports.push(CriterionReport {
            id,
            name,
            pass,
            detail,
            elapsed_ms: start.elapsed().as_millis(),
        });
    }
    reports
}
