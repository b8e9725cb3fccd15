//! Dispatches scenario requests onto the engine and assembles the report in
//! declaration order.

use crate::report::{Computation, Report, Status};
use crate::scenario::{resolve_aut_spec, Request, Scenario};
use torsorforge_core as core;
use torsorforge_core::{Error, FiniteGroup, Nerve, Twist};

/// The commands exposed by the runner; each selects the scenario requests of
/// the matching kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    ClassifyTorsors,
    ClassifyCoverings,
    Cech,
    Compare,
    Oracle,
    HolonomyRoundtrip,
    FrameRoundtrip,
    Gauge,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ClassifyTorsors => "classify-torsors",
            Command::ClassifyCoverings => "classify-coverings",
            Command::Cech => "cech",
            Command::Compare => "compare",
            Command::Oracle => "oracle",
            Command::HolonomyRoundtrip => "holonomy-roundtrip",
            Command::FrameRoundtrip => "frame-roundtrip",
            Command::Gauge => "gauge",
        }
    }

    fn matches(&self, r: &Request) -> bool {
        matches!(
            (self, r),
            (Command::ClassifyTorsors, Request::Torsors { .. })
                | (Command::ClassifyCoverings, Request::Coverings { .. })
                | (Command::Cech, Request::Cech { .. })
                | (Command::Compare, Request::Compare { .. })
                | (Command::Oracle, Request::Oracle { .. })
                | (Command::HolonomyRoundtrip, Request::HolonomyRoundtrip { .. })
                | (Command::FrameRoundtrip, Request::FrameRoundtrip { .. })
                | (Command::Gauge, Request::Gauge { .. })
        )
    }
}

fn wide_pow(base: usize, exp: usize) -> String {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out = out.saturating_mul(base as u128);
    }
    out.to_string()
}

/// Resolves the twist lines declared for a nerve against a coefficient
/// group. Declarations on reversed overlaps store the inverse automorphism.
fn resolve_twist(
    scenario: &Scenario,
    nerve_name: &str,
    nerve: &Nerve,
    gamma: &FiniteGroup,
) -> Result<Option<Twist>, Error> {
    let Some(lines) = scenario.twists.get(nerve_name) else {
        return Ok(None);
    };
    let id: Vec<usize> = (0..gamma.order()).collect();
    let mut kappas = vec![id; nerve.overlaps().len()];
    for (i, j, spec) in lines {
        let tokens: Vec<&str> = spec.split_whitespace().collect();
        let arr = resolve_aut_spec(gamma, &tokens).map_err(Error::Invalid)?;
        let e = nerve
            .edge_index(*i, *j)
            .ok_or_else(|| Error::Invalid(format!("({i}, {j}) is not an overlap")))?;
        if i < j {
            kappas[e] = arr;
        } else {
            let mut inv = vec![0usize; arr.len()];
            for (x, &y) in arr.iter().enumerate() {
                if y >= arr.len() {
                    return Err(Error::NotBijective(arr.clone()));
                }
                inv[y] = x;
            }
            kappas[e] = inv;
        }
    }
    Ok(Some(Twist::new(nerve, gamma, kappas)?))
}

/// Derives the morphism `φ : Q → Aut(Γ)` from the action's generator
/// automorphisms and the quotient map, by closing the seeded values under
/// products with consistency checks.
fn derive_phi_q(
    q: &FiniteGroup,
    gen_auts: &[Vec<usize>],
    quotient_map: &[usize],
    gamma_order: usize,
) -> Result<Vec<Vec<usize>>, Error> {
    let identity: Vec<usize> = (0..gamma_order).collect();
    let mut phi: Vec<Option<Vec<usize>>> = vec![None; q.order()];
    phi[0] = Some(identity);
    for (i, &qe) in quotient_map.iter().enumerate() {
        match &phi[qe] {
            None => phi[qe] = Some(gen_auts[i].clone()),
            Some(existing) => {
                if existing != &gen_auts[i] {
                    return Err(Error::BadQuotient(format!(
                        "quotient element {qe} is seeded with two different automorphisms"
                    )));
                }
            }
        }
    }
    loop {
        let mut progressed = false;
        for a in 0..q.order() {
            for b in 0..q.order() {
                let (Some(fa), Some(fb)) = (&phi[a], &phi[b]) else { continue };
                let composed: Vec<usize> = (0..gamma_order).map(|x| fa[fb[x]]).collect();
                let ab = q.mul(a, b);
                match &phi[ab] {
                    None => {
                        phi[ab] = Some(composed);
                        progressed = true;
                    }
                    Some(existing) => {
                        if existing != &composed {
                            return Err(Error::BadQuotient(format!(
                                "products disagree on quotient element {ab}"
                            )));
                        }
                    }
                }
            }
        }
        if !progressed {
            break;
        }
    }
    phi.into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| {
                Error::BadQuotient(format!("quotient element {i} is not reached by the map"))
            })
        })
        .collect()
}

pub fn run(scenario: &Scenario, command: Command, report: &mut Report, budget: u64) -> Result<(), Error> {
    let mut index = 0;
    for request in &scenario.requests {
        if !command.matches(request) {
            continue;
        }
        index += 1;
        let computation = run_request(scenario, request, index, budget)?;
        report.computations.push(computation);
    }
    Ok(())
}

fn run_request(
    scenario: &Scenario,
    request: &Request,
    index: usize,
    budget: u64,
) -> Result<Computation, Error> {
    let mut c = Computation {
        index,
        kind: request.kind().to_string(),
        target: request.target(),
        status: Status::Ok,
        classes: None,
        representatives: None,
        detail: None,
        search_space: "0".to_string(),
    };
    match request {
        Request::Torsors { action } => {
            let decl = &scenario.actions[action];
            let result = core::h1_classes(&decl.module, budget)?;
            c.search_space = wide_pow(
                decl.module.coefficients().order(),
                decl.module.presentation().ngens(),
            );
            c.classes = Some(result.class_count());
            c.representatives = Some(
                result
                    .representatives
                    .iter()
                    .map(|&r| result.cocycles[r].values().to_vec())
                    .collect(),
            );
        }
        Request::Coverings { presentation, group } => {
            let (p, _) = &scenario.presentations[presentation];
            let gamma = &scenario.groups[group];
            let auts = core::enumerate_automorphisms(gamma)?;
            let result = core::classify_group_coverings(p, gamma, budget)?;
            c.search_space = wide_pow(auts.order(), p.ngens());
            c.classes = Some(result.class_count());
            c.representatives = Some(
                result
                    .representatives
                    .iter()
                    .map(|&r| result.cocycles[r].values().to_vec())
                    .collect(),
            );
        }
        Request::Cech { nerve, group } => {
            let n = &scenario.nerves[nerve];
            let gamma = &scenario.groups[group];
            let twist = resolve_twist(scenario, nerve, n, gamma)?;
            let result = core::cech_h1(n, gamma, twist.as_ref(), budget)?;
            c.search_space = wide_pow(gamma.order(), n.overlaps().len());
            c.classes = Some(result.class_count());
            c.representatives = Some(
                result
                    .representatives
                    .iter()
                    .map(|&r| result.cocycles[r].values().to_vec())
                    .collect(),
            );
        }
        Request::Compare { nerve, group } => {
            let n = &scenario.nerves[nerve];
            let gamma = &scenario.groups[group];
            let twist = resolve_twist(scenario, nerve, n, gamma)?;
            let cmp = core::compare_cech_group_cohomology(n, gamma, twist.as_ref(), budget)?;
            c.search_space = wide_pow(gamma.order(), n.overlaps().len());
            c.classes = Some(cmp.cech_classes);
            if cmp.matched {
                c.detail = Some(format!("{} = {}, matched", cmp.cech_classes, cmp.group_classes));
            } else {
                c.status = Status::Mismatch;
                c.detail = Some(format!(
                    "{} vs {}: {}",
                    cmp.cech_classes,
                    cmp.group_classes,
                    cmp.failure.unwrap_or_else(|| "mismatch".into())
                ));
            }
        }
        Request::Oracle { action, quotient, map } => {
            let decl = &scenario.actions[action];
            let q = &scenario.groups[quotient];
            let quotient_map: Vec<usize> = map
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::BadQuotient(format!("bad quotient image `{t}`")))
                })
                .collect::<Result<_, _>>()?;
            if quotient_map.len() != decl.module.presentation().ngens() {
                return Err(Error::BadQuotient("one quotient image per generator required".into()));
            }
            let gamma = decl.module.coefficients();
            let phi_q = derive_phi_q(q, &decl.gen_auts, &quotient_map, gamma.order())?;
            let direct = core::h1_classes(&decl.module, budget)?;
            let sd = core::h1_via_semidirect(
                decl.module.presentation(),
                gamma,
                q,
                &quotient_map,
                &phi_q,
                budget,
            )?;
            c.search_space = wide_pow(gamma.order(), decl.module.presentation().ngens());
            c.classes = Some(direct.class_count());
            if direct.class_count() == sd.class_count()
                && core::match_semidirect(&direct, &sd, &quotient_map).is_ok()
            {
                c.detail =
                    Some(format!("semidirect {} = direct {}", sd.class_count(), direct.class_count()));
            } else {
                c.status = Status::Mismatch;
                c.detail = Some(format!(
                    "semidirect {} vs direct {}",
                    sd.class_count(),
                    direct.class_count()
                ));
            }
        }
        Request::HolonomyRoundtrip { cover, group, deckaction } => {
            let cov = &scenario.covers[cover];
            let gamma = &scenario.groups[group];
            let da = &scenario.deckactions[deckaction];
            if &da.cover != cover || &da.group != group {
                return Err(Error::Invalid(
                    "deckaction was declared for a different cover or group".into(),
                ));
            }
            let zeta = core::build_group_covering(cov, gamma, &da.phi)?;
            let classes = core::deck_h1_classes(cov.deck(), gamma, &da.phi)?;
            c.search_space = wide_pow(gamma.order(), cov.deck().order());
            c.classes = Some(classes.class_count());
            let mut ok = true;
            let torsors: Vec<core::TorsorModel> = classes
                .cocycles
                .iter()
                .map(|rho| core::build_torsor(&zeta, rho))
                .collect::<Result<_, _>>()?;
            for (i, t) in torsors.iter().enumerate() {
                let extracted = core::holonomy(t, 0)?;
                match classes.find(&extracted) {
                    Some(j) if classes.orbit_of(i) == classes.orbit_of(j) => {}
                    _ => ok = false,
                }
            }
            for i in 0..torsors.len() {
                for j in 0..torsors.len() {
                    let same = classes.orbit_of(i) == classes.orbit_of(j);
                    let iso = !core::torsor_isomorphisms(&torsors[i], &torsors[j], budget)?
                        .is_empty();
                    if same != iso {
                        ok = false;
                    }
                }
            }
            if ok {
                c.detail = Some(format!(
                    "{} torsors, {} classes, round trips and partition match",
                    torsors.len(),
                    classes.class_count()
                ));
            } else {
                c.status = Status::Mismatch;
                c.detail = Some("holonomy or partition mismatch".into());
            }
        }
        Request::FrameRoundtrip { reference, bundle } => {
            let e = &scenario.bundles[reference];
            let e_prime = &scenario.bundles[bundle];
            let fr = core::frame_bundle(e, e_prime)?;
            let assoc = core::associated_bundle(&fr, e)?;
            let back_ok = !core::bundle_isomorphisms(&assoc, e_prime)?.is_empty();
            let fr_round = core::frame_bundle(e, &assoc)?;
            let torsor_ok = !core::torsor_isomorphisms(&fr_round, &fr, budget)?.is_empty();
            c.search_space = wide_pow(
                (1..=e.fibre_size()).product::<usize>(),
                e.base().num_edges(),
            );
            if back_ok && torsor_ok {
                c.detail = Some("Fr(E')[E] = E' and Fr(P[E]) = P up to isomorphism".into());
            } else {
                c.status = Status::Mismatch;
                c.detail = Some("frame round trip failed".into());
            }
        }
        Request::Gauge { torsor } => {
            let decl = &scenario.torsors[torsor];
            let cov = &scenario.covers[&decl.cover];
            let gamma = &scenario.groups[&decl.group];
            let da = &scenario.deckactions[&decl.deckaction];
            if da.cover != decl.cover || da.group != decl.group {
                return Err(Error::Invalid(
                    "deckaction was declared for a different cover or group".into(),
                ));
            }
            let zeta = core::build_group_covering(cov, gamma, &da.phi)?;
            let t = core::build_torsor(&zeta, &decl.rho)?;
            let gauge = core::gauge_group(&t)?;
            let (auto_group, autos) = core::automorphism_composition_group(&t, budget)?;
            c.search_space = wide_pow(gamma.order(), 1);
            c.classes = Some(gauge.group.order());
            let isomorphic = gauge.group.order() == autos.len()
                && gauge.sections == autos
                && core::find_isomorphism(&gauge.group, &auto_group).is_some();
            if isomorphic {
                c.detail = Some(format!(
                    "gauge order {} = automorphism order {}, isomorphic",
                    gauge.group.order(),
                    autos.len()
                ));
            } else {
                c.status = Status::Mismatch;
                c.detail = Some(format!(
                    "gauge order {} vs automorphism order {}",
                    gauge.group.order(),
                    autos.len()
                ));
            }
        }
    }
    Ok(c)
}
