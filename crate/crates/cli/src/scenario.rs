//! Line-oriented scenario files, version header `torsorforge v1`.
//!
//! Every directive occupies one line; `#` starts a comment. Objects are
//! declared before they are referenced, and every declared action is
//! validated against its module invariant at parse time. Diagnostics carry
//! the line number and a stable error code.

use std::collections::BTreeMap;
use std::fmt;
use torsorforge_core::{
    enumerate_automorphisms, CoveringModel, FibreBundleModel, FiniteGroup, Graph, GroupSpec,
    Nerve, PiGroup, Presentation, Word,
};

/// Stable diagnostic codes for scenario rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioErrorKind {
    /// E01: the version header is missing or wrong.
    BadHeader,
    /// E02: the first word of a line is not a known directive.
    UnknownDirective,
    /// E03: a directive references a name that was never declared.
    DanglingReference,
    /// E04: a directive is syntactically malformed.
    Syntax,
    /// E05: declared data violates a module invariant.
    Invariant,
    /// E06: a name is declared twice.
    Duplicate,
}

impl ScenarioErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            ScenarioErrorKind::BadHeader => "E01",
            ScenarioErrorKind::UnknownDirective => "E02",
            ScenarioErrorKind::DanglingReference => "E03",
            ScenarioErrorKind::Syntax => "E04",
            ScenarioErrorKind::Invariant => "E05",
            ScenarioErrorKind::Duplicate => "E06",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioError {
    pub kind: ScenarioErrorKind,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (line {}): {}", self.kind.code(), self.line, self.message)
    }
}

impl std::error::Error for ScenarioError {}

fn err(kind: ScenarioErrorKind, line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError { kind, line, message: message.into() }
}

/// A declared action: coefficients validated as a module of the presented
/// group at parse time.
#[derive(Debug, Clone)]
pub struct ActionDecl {
    pub module: PiGroup,
    /// Per-generator automorphism arrays, generator order.
    pub gen_auts: Vec<Vec<usize>>,
}

/// A declared deck action: one automorphism of the fibre group per deck
/// element, validated as an action.
#[derive(Debug, Clone)]
pub struct DeckActionDecl {
    pub cover: String,
    pub group: String,
    pub phi: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct TorsorDecl {
    pub cover: String,
    pub group: String,
    pub deckaction: String,
    pub rho: Vec<usize>,
}

/// A classification request, in declaration order.
#[derive(Debug, Clone)]
pub enum Request {
    Torsors { action: String },
    Coverings { presentation: String, group: String },
    Cech { nerve: String, group: String },
    Compare { nerve: String, group: String },
    Oracle { action: String, quotient: String, map: Vec<String> },
    HolonomyRoundtrip { cover: String, group: String, deckaction: String },
    FrameRoundtrip { reference: String, bundle: String },
    Gauge { torsor: String },
}

impl Request {
    pub fn kind(&self) -> &'static str {
        match self {
            Request::Torsors { .. } => "torsors",
            Request::Coverings { .. } => "coverings",
            Request::Cech { .. } => "cech",
            Request::Compare { .. } => "compare",
            Request::Oracle { .. } => "oracle",
            Request::HolonomyRoundtrip { .. } => "holonomy-roundtrip",
            Request::FrameRoundtrip { .. } => "frame-roundtrip",
            Request::Gauge { .. } => "gauge",
        }
    }

    pub fn target(&self) -> String {
        match self {
            Request::Torsors { action } => action.clone(),
            Request::Coverings { presentation, group } => format!("{presentation} {group}"),
            Request::Cech { nerve, group } => format!("{nerve} {group}"),
            Request::Compare { nerve, group } => format!("{nerve} {group}"),
            Request::Oracle { action, quotient, .. } => format!("{action} {quotient}"),
            Request::HolonomyRoundtrip { cover, group, deckaction } => {
                format!("{cover} {group} {deckaction}")
            }
            Request::FrameRoundtrip { reference, bundle } => format!("{reference} {bundle}"),
            Request::Gauge { torsor } => torsor.clone(),
        }
    }
}

/// A parsed and validated scenario.
#[derive(Debug, Clone, Default)]
pub struct Scenario {
    pub groups: BTreeMap<String, FiniteGroup>,
    pub presentations: BTreeMap<String, (Presentation, Vec<String>)>,
    pub actions: BTreeMap<String, ActionDecl>,
    pub nerves: BTreeMap<String, Nerve>,
    /// Twists are stored raw and resolved against the coefficient group at
    /// run time: (patch i, patch j, automorphism spec).
    pub twists: BTreeMap<String, Vec<(usize, usize, String)>>,
    pub graphs: BTreeMap<String, Graph>,
    pub covers: BTreeMap<String, CoveringModel>,
    pub deckactions: BTreeMap<String, DeckActionDecl>,
    pub bundles: BTreeMap<String, FibreBundleModel>,
    pub torsors: BTreeMap<String, TorsorDecl>,
    pub requests: Vec<Request>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut scenario = Scenario::default();
    let mut saw_header = false;
    // bundles and actions are assembled across lines, then sealed
    let mut bundle_parts: BTreeMap<String, (String, usize, BTreeMap<usize, Vec<usize>>)> =
        BTreeMap::new();
    let mut action_parts: BTreeMap<String, ActionParts> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line == "torsorforge v1" {
                saw_header = true;
                continue;
            }
            return Err(err(
                ScenarioErrorKind::BadHeader,
                line_no,
                "expected version header `torsorforge v1`",
            ));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "group" => parse_group(&mut scenario, line, &tokens, line_no)?,
            "presentation" => parse_presentation(&mut scenario, line, line_no)?,
            "action" => parse_action(&mut action_parts, &scenario, &tokens, line_no)?,
            "nerve" => parse_nerve(&mut scenario, line, line_no)?,
            "twist" => parse_twist(&mut scenario, &tokens, line_no)?,
            "graph" => parse_graph(&mut scenario, &tokens, line_no)?,
            "cover" => parse_cover(&mut scenario, &tokens, line_no)?,
            "deckaction" => parse_deckaction(&mut scenario, &tokens, line_no)?,
            "bundle" => parse_bundle(&mut bundle_parts, &scenario, &tokens, line_no)?,
            "transition" => parse_transition(&mut bundle_parts, &tokens, line_no)?,
            "torsor" => parse_torsor(&mut scenario, &tokens, line_no)?,
            "classify" => parse_classify(&mut scenario, &tokens, line_no)?,
            other => {
                return Err(err(
                    ScenarioErrorKind::UnknownDirective,
                    line_no,
                    format!("unknown directive `{other}`"),
                ))
            }
        }
    }
    if !saw_header && !text.trim().is_empty() {
        return Err(err(ScenarioErrorKind::BadHeader, 1, "missing `torsorforge v1` header"));
    }
    // seal actions: unspecified generators act as the identity; the full
    // module invariant (relators act trivially) is checked here, before any
    // computation can run
    for (name, parts) in action_parts {
        let group = scenario.groups.get(&parts.group).expect("checked at parse");
        let (presentation, _) = scenario.presentations.get(&parts.presentation).expect("checked");
        let gen_auts: Vec<Vec<usize>> = parts
            .gen_auts
            .iter()
            .map(|a| a.clone().unwrap_or_else(|| (0..group.order()).collect()))
            .collect();
        let module = PiGroup::new(presentation.clone(), group.clone(), gen_auts.clone())
            .map_err(|e| {
                err(ScenarioErrorKind::Invariant, parts.line, format!("action `{name}`: {e}"))
            })?;
        scenario.actions.insert(name, ActionDecl { module, gen_auts });
    }
    // seal bundles: unspecified transitions default to the identity
    for (name, (graph_name, fibre, transitions)) in bundle_parts {
        let graph = scenario.graphs.get(&graph_name).ok_or_else(|| {
            err(ScenarioErrorKind::DanglingReference, 0, format!("graph `{graph_name}` not declared"))
        })?;
        let mut full = Vec::new();
        for e in 0..graph.num_edges() {
            match transitions.get(&e) {
                Some(t) => full.push(t.clone()),
                None => full.push((0..fibre).collect()),
            }
        }
        let bundle = FibreBundleModel::new(graph.clone(), fibre, full)
            .map_err(|e| err(ScenarioErrorKind::Invariant, 0, format!("bundle `{name}`: {e}")))?;
        scenario.bundles.insert(name, bundle);
    }
    // requests referencing undeclared objects are rejected here so that the
    // whole scenario is known-resolvable before any computation runs
    for r in &scenario.requests {
        validate_request(&scenario, r)?;
    }
    Ok(scenario)
}

fn check_fresh(
    taken: bool,
    name: &str,
    line: usize,
) -> Result<(), ScenarioError> {
    if taken {
        Err(err(ScenarioErrorKind::Duplicate, line, format!("name `{name}` is already declared")))
    } else {
        Ok(())
    }
}

fn parse_group(
    scenario: &mut Scenario,
    line: &str,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    if tokens.len() < 3 {
        return Err(err(ScenarioErrorKind::Syntax, line_no, "usage: group <name> <group-spec>"));
    }
    let name = tokens[1].to_string();
    check_fresh(scenario.groups.contains_key(&name), &name, line_no)?;
    let spec_text = line[line.find(tokens[1]).unwrap() + tokens[1].len()..].trim();
    let spec = parse_group_spec(spec_text)
        .map_err(|m| err(ScenarioErrorKind::Syntax, line_no, m))?;
    let group = spec
        .build()
        .map_err(|e| err(ScenarioErrorKind::Invariant, line_no, e.to_string()))?;
    scenario.groups.insert(name, group);
    Ok(())
}

/// Grammar: `cyclic N`, `symmetric N`, `product(<spec>,<spec>)`, `gl N Q`,
/// `sl N Q`, `table [r; r; ...]`, `perm [..] [..] ...`.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, String> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("cyclic") {
        let n: usize = rest.trim().parse().map_err(|_| "cyclic needs an integer".to_string())?;
        return Ok(GroupSpec::Cyclic(n));
    }
    if let Some(rest) = text.strip_prefix("symmetric") {
        let n: usize = rest.trim().parse().map_err(|_| "symmetric needs an integer".to_string())?;
        return Ok(GroupSpec::Symmetric(n));
    }
    if let Some(rest) = text.strip_prefix("product") {
        let rest = rest.trim();
        if !rest.starts_with('(') || !rest.ends_with(')') {
            return Err("product needs parenthesised arguments".into());
        }
        let inner = &rest[1..rest.len() - 1];
        // split at the top-level comma
        let mut depth = 0usize;
        let mut split = None;
        for (i, ch) in inner.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let split = split.ok_or_else(|| "product needs two comma-separated specs".to_string())?;
        let left = parse_group_spec(&inner[..split])?;
        let right = parse_group_spec(&inner[split + 1..])?;
        return Ok(GroupSpec::Product(Box::new(left), Box::new(right)));
    }
    if let Some(rest) = text.strip_prefix("gl") {
        let nums = parse_ints(rest)?;
        if nums.len() != 2 {
            return Err("gl needs two integers".into());
        }
        return Ok(GroupSpec::Gl(nums[0], nums[1]));
    }
    if let Some(rest) = text.strip_prefix("sl") {
        let nums = parse_ints(rest)?;
        if nums.len() != 2 {
            return Err("sl needs two integers".into());
        }
        return Ok(GroupSpec::Sl(nums[0], nums[1]));
    }
    if let Some(rest) = text.strip_prefix("table") {
        let rest = rest.trim();
        if !rest.starts_with('[') || !rest.ends_with(']') {
            return Err("table needs a bracketed row list".into());
        }
        let inner = &rest[1..rest.len() - 1];
        let rows: Vec<Vec<usize>> = inner
            .split(';')
            .map(|r| parse_ints(r))
            .collect::<Result<_, _>>()?;
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err("table rows must all have length equal to the row count".into());
        }
        return Ok(GroupSpec::Table(order, rows.into_iter().flatten().collect()));
    }
    if let Some(rest) = text.strip_prefix("perm") {
        let mut gens = Vec::new();
        let mut rest = rest.trim();
        while let Some(open) = rest.find('[') {
            let close = rest[open..]
                .find(']')
                .ok_or_else(|| "unclosed bracket in perm spec".to_string())?
                + open;
            gens.push(parse_ints(&rest[open + 1..close])?);
            rest = &rest[close + 1..];
        }
        if gens.is_empty() {
            return Err("perm needs at least one bracketed generator".into());
        }
        let degree = gens[0].len();
        if gens.iter().any(|g| g.len() != degree) {
            return Err("perm generators must share a degree".into());
        }
        return Ok(GroupSpec::Perm(degree, gens));
    }
    Err(format!("unrecognised group spec `{text}`"))
}

fn parse_ints(text: &str) -> Result<Vec<usize>, String> {
    text.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| format!("`{t}` is not a nonnegative integer")))
        .collect()
}

fn parse_presentation(
    scenario: &mut Scenario,
    line: &str,
    line_no: usize,
) -> Result<(), ScenarioError> {
    // presentation <name> gens a b; rel a b a^-1 b^-1; ...
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() < 3 {
        return Err(err(
            ScenarioErrorKind::Syntax,
            line_no,
            "usage: presentation <name> gens ...; rel ...;",
        ));
    }
    let name = tokens[1].to_string();
    check_fresh(scenario.presentations.contains_key(&name), &name, line_no)?;
    let body = line[line.find(tokens[1]).unwrap() + tokens[1].len()..].trim();
    let mut gen_names: Vec<String> = Vec::new();
    let mut relators: Vec<Word> = Vec::new();
    for section in body.split(';') {
        let section = section.trim();
        if section.is_empty() {
            continue;
        }
        let parts: Vec<&str> = section.split_whitespace().collect();
        match parts[0] {
            "gens" => {
                for g in &parts[1..] {
                    if gen_names.iter().any(|n| n == g) {
                        return Err(err(
                            ScenarioErrorKind::Syntax,
                            line_no,
                            format!("generator `{g}` declared twice"),
                        ));
                    }
                    gen_names.push(g.to_string());
                }
            }
            "rel" => {
                let mut letters = Vec::new();
                for t in &parts[1..] {
                    let (base, inverse) = match t.strip_suffix("^-1") {
                        Some(b) => (b, true),
                        None => (*t, false),
                    };
                    let gen = gen_names.iter().position(|n| n == base).ok_or_else(|| {
                        err(
                            ScenarioErrorKind::DanglingReference,
                            line_no,
                            format!("relator letter `{base}` is not a declared generator"),
                        )
                    })?;
                    let l = (gen + 1) as i64;
                    letters.push(if inverse { -l } else { l });
                }
                let word = Word::reduce(&letters)
                    .map_err(|e| err(ScenarioErrorKind::Invariant, line_no, e.to_string()))?;
                relators.push(word);
            }
            other => {
                return Err(err(
                    ScenarioErrorKind::Syntax,
                    line_no,
                    format!("expected `gens` or `rel`, got `{other}`"),
                ))
            }
        }
    }
    let presentation = Presentation::new(gen_names.len(), relators)
        .map_err(|e| err(ScenarioErrorKind::Invariant, line_no, e.to_string()))?;
    scenario.presentations.insert(name, (presentation, gen_names));
    Ok(())
}

/// Automorphism specs: `id`, `inv`, `pow K`, `conj K`, `aut K`,
/// `images i0 i1 ...`, or a bare index `K` meaning `aut K`.
pub fn resolve_aut_spec(group: &FiniteGroup, spec: &[&str]) -> Result<Vec<usize>, String> {
    if spec.is_empty() {
        return Err("empty automorphism spec".into());
    }
    if spec.len() == 1 && spec[0].chars().all(|c| c.is_ascii_digit()) {
        return resolve_aut_spec(group, &["aut", spec[0]]);
    }
    let arr: Vec<usize> = match spec[0] {
        "id" => (0..group.order()).collect(),
        "inv" => (0..group.order()).map(|x| group.inv(x)).collect(),
        "pow" => {
            let k: usize = spec
                .get(1)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| "pow needs an integer".to_string())?;
            (0..group.order())
                .map(|x| {
                    let mut acc = 0;
                    for _ in 0..k {
                        acc = group.mul(acc, x);
                    }
                    acc
                })
                .collect()
        }
        "conj" => {
            let by: usize = spec
                .get(1)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| "conj needs an element index".to_string())?;
            if by >= group.order() {
                return Err(format!("element {by} out of range"));
            }
            (0..group.order()).map(|x| group.conjugate(by, x)).collect()
        }
        "aut" => {
            let k: usize = spec
                .get(1)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| "aut needs an index".to_string())?;
            let auts = enumerate_automorphisms(group).map_err(|e| e.to_string())?;
            if k >= auts.order() {
                return Err(format!("automorphism index {k} out of range (|Aut| = {})", auts.order()));
            }
            auts.elements[k].clone()
        }
        "images" => {
            let vals = spec[1..]
                .iter()
                .map(|t| t.parse::<usize>().map_err(|_| format!("bad image `{t}`")))
                .collect::<Result<Vec<_>, _>>()?;
            vals
        }
        other => return Err(format!("unknown automorphism spec `{other}`")),
    };
    Ok(arr)
}

/// An action under assembly: one `action` line per generator, sealed and
/// validated after the whole file is read.
struct ActionParts {
    group: String,
    presentation: String,
    gen_auts: Vec<Option<Vec<usize>>>,
    line: usize,
}

fn parse_action(
    parts: &mut BTreeMap<String, ActionParts>,
    scenario: &Scenario,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    // action <name> on <group> via <presentation> gen <g>: <aut-spec>
    if tokens.len() < 9 || tokens[2] != "on" || tokens[4] != "via" || tokens[6] != "gen" {
        return Err(err(
            ScenarioErrorKind::Syntax,
            line_no,
            "usage: action <name> on <group> via <presentation> gen <g>: <aut-spec>",
        ));
    }
    let name = tokens[1].to_string();
    let group_name = tokens[3].to_string();
    let pres_name = tokens[5].to_string();
    let (gen_token, spec_start) = if tokens[7].ends_with(':') {
        (tokens[7].trim_end_matches(':'), 8)
    } else if tokens.get(8) == Some(&":") {
        (tokens[7], 9)
    } else {
        return Err(err(ScenarioErrorKind::Syntax, line_no, "generator must be followed by `:`"));
    };
    let group = scenario.groups.get(&group_name).ok_or_else(|| {
        err(ScenarioErrorKind::DanglingReference, line_no, format!("group `{group_name}` not declared"))
    })?;
    let (presentation, gen_names) = scenario.presentations.get(&pres_name).ok_or_else(|| {
        err(
            ScenarioErrorKind::DanglingReference,
            line_no,
            format!("presentation `{pres_name}` not declared"),
        )
    })?;
    let gen_index = gen_names.iter().position(|g| g == gen_token).ok_or_else(|| {
        err(
            ScenarioErrorKind::DanglingReference,
            line_no,
            format!("generator `{gen_token}` is not in presentation `{pres_name}`"),
        )
    })?;
    let aut = resolve_aut_spec(group, &tokens[spec_start..])
        .map_err(|m| err(ScenarioErrorKind::Syntax, line_no, m))?;
    use std::collections::btree_map::Entry;
    match parts.entry(name) {
        Entry::Vacant(v) => {
            let mut gen_auts: Vec<Option<Vec<usize>>> = vec![None; presentation.ngens()];
            gen_auts[gen_index] = Some(aut);
            v.insert(ActionParts {
                group: group_name,
                presentation: pres_name,
                gen_auts,
                line: line_no,
            });
        }
        Entry::Occupied(mut o) => {
            let decl = o.get_mut();
            if decl.group != group_name || decl.presentation != pres_name {
                return Err(err(
                    ScenarioErrorKind::Syntax,
                    line_no,
                    "action lines for one name must agree on group and presentation",
                ));
            }
            decl.gen_auts[gen_index] = Some(aut);
        }
    }
    Ok(())
}

fn parse_nerve(scenario: &mut Scenario, line: &str, line_no: usize) -> Result<(), ScenarioError> {
    // nerve <name> patches N; overlap i j; triple i j k;
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() < 3 {
        return Err(err(ScenarioErrorKind::Syntax, line_no, "usage: nerve <name> patches N; ..."));
    }
    let name = tokens[1].to_string();
    check_fresh(scenario.nerves.contains_key(&name), &name, line_no)?;
    let body = line[line.find(tokens[1]).unwrap() + tokens[1].len()..].trim();
    let mut patches = None;
    let mut overlaps = Vec::new();
    let mut triples = Vec::new();
    for section in body.split(';') {
        let section = section.trim();
        if section.is_empty() {
            continue;
        }
        let parts: Vec<&str> = section.split_whitespace().collect();
        let nums = parse_ints(&parts[1..].join(" "))
            .map_err(|m| err(ScenarioErrorKind::Syntax, line_no, m))?;
        match parts[0] {
            "patches" if nums.len() == 1 => patches = Some(nums[0]),
            "overlap" if nums.len() == 2 => overlaps.push((nums[0], nums[1])),
            "triple" if nums.len() == 3 => triples.push((nums[0], nums[1], nums[2])),
            other => {
                return Err(err(
                    ScenarioErrorKind::Syntax,
                    line_no,
                    format!("bad nerve section `{other}`"),
                ))
            }
        }
    }
    let patches = patches
        .ok_or_else(|| err(ScenarioErrorKind::Syntax, line_no, "nerve needs a patches count"))?;
    let nerve = Nerve::new(patches, overlaps, triples)
        .map_err(|e| err(ScenarioErrorKind::Invariant, line_no, e.to_string()))?;
    scenario.nerves.insert(name, nerve);
    Ok(())
}

fn parse_twist(
    scenario: &mut Scenario,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    // twist <nerve> <i> <j> <aut-spec>
    if tokens.len() < 5 {
        return Err(err(ScenarioErrorKind::Syntax, line_no, "usage: twist <nerve> i j <aut-spec>"));
    }
    let nerve_name = tokens[1].to_string();
    let nerve = scenario.nerves.get(&nerve_name).ok_or_else(|| {
        err(ScenarioErrorKind::DanglingReference, line_no, format!("nerve `{nerve_name}` not declared"))
    })?;
    let i: usize = tokens[2]
        .parse()
        .map_err(|_| err(ScenarioErrorKind::Syntax, line_no, "bad patch index"))?;
    let j: usize = tokens[3]
        .parse()
        .map_err(|_| err(ScenarioErrorKind::Syntax, line_no, "bad patch index"))?;
    if nerve.edge_index(i, j).is_none() {
        return Err(err(
            ScenarioErrorKind::Invariant,
            line_no,
            format!("({i}, {j}) is not an overlap of `{nerve_name}`"),
        ));
    }
    let spec = tokens[4..].join(" ");
    scenario.twists.entry(nerve_name).or_default().push((i, j, spec));
    Ok(())
}

fn parse_graph(
    scenario: &mut Scenario,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    // graph <name> vertices N edges u-v u-v ...
    if tokens.len() < 4 || tokens[2] != "vertices" {
        return Err(err(
            ScenarioErrorKind::Syntax,
            line_no,
            "usage: graph <name> vertices N edges u-v ...",
        ));
    }
    let name = tokens[1].to_string();
    check_fresh(scenario.graphs.contains_key(&name), &name, line_no)?;
    let n: usize = tokens[3]
        .parse()
        .map_err(|_| err(ScenarioErrorKind::Syntax, line_no, "bad vertex count"))?;
    let mut edges = Vec::new();
    if tokens.len() > 4 {
        if tokens[4] != "edges" {
            return Err(err(ScenarioErrorKind::Syntax, line_no, "expected `edges`"));
        }
        for t in &tokens[5..] {
            let (u, v) = t
                .split_once('-')
                .ok_or_else(|| err(ScenarioErrorKind::Syntax, line_no, format!("bad edge `{t}`")))?;
            let u: usize = u
                .parse()
                .map_err(|_| err(ScenarioErrorKind::Syntax, line_no, format!("bad edge `{t}`")))?;
            let v: usize = v
                .parse()
                .map_err(|_| err(ScenarioErrorKind::Syntax, line_no, format!("bad edge `{t}`")))?;
            edges.push((u, v));
        }
    }
    let graph = Graph::new(n, edges)
        .map_err(|e| err(ScenarioErrorKind::Invariant, line_no, e.to_string()))?;
    scenario.graphs.insert(name, graph);
    Ok(())
}

fn parse_cover(
    scenario: &mut Scenario,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    // cover <name> base <graph> deck <group> voltages g0 g1 ...
    if tokens.len() < 7 || tokens[2] != "base" || tokens[4] != "deck" || tokens[6] != "voltages" {
        return Err(err(
            ScenarioErrorKind::Syntax,
            line_no,
            "usage: cover <name> base <graph> deck <group> voltages g0 g1 ...",
        ));
    }
    let name = tokens[1].to_string();
    check_fresh(scenario.covers.contains_key(&name), &name, line_no)?;
    let graph = scenario.graphs.get(tokens[3]).ok_or_else(|| {
        err(ScenarioErrorKind::DanglingReference, line_no, format!("graph `{}` not declared", tokens[3]))
    })?;
    let deck = scenario.groups.get(tokens[5]).ok_or_else(|| {
        err(ScenarioErrorKind::DanglingReference, line_no, format!("group `{}` not declared", tokens[5]))
    })?;
    let voltages = parse_ints(&tokens[7..].join(" "))
        .map_err(|m| err(ScenarioErrorKind::Syntax, line_no, m))?;
    let cover = CoveringModel::from_voltages(graph.clone(), deck.clone(), voltages)
        .map_err(|e| err(ScenarioErrorKind::Invariant, line_no, e.to_string()))?;
    scenario.covers.insert(name, cover);
    Ok(())
}

fn parse_deckaction(
    scenario: &mut Scenario,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    // deckaction <name> cover <cover> group <group> elem <k>: <aut-spec>
    if tokens.len() < 9 || tokens[2] != "cover" || tokens[4] != "group" || tokens[6] != "elem" {
        return Err(err(
            ScenarioErrorKind::Syntax,
            line_no,
            "usage: deckaction <name> cover <cover> group <group> elem <k>: <aut-spec>",
        ));
    }
    let name = tokens[1].to_string();
    let cover_name = tokens[3].to_string();
    let group_name = tokens[5].to_string();
    let cover = scenario.covers.get(&cover_name).ok_or_else(|| {
        err(ScenarioErrorKind::DanglingReference, line_no, format!("cover `{cover_name}` not declared"))
    })?;
    let group = scenario.groups.get(&group_name).ok_or_else(|| {
        err(ScenarioErrorKind::DanglingReference, line_no, format!("group `{group_name}` not declared"))
    })?;
    let (elem_token, spec_start) = if tokens[7].ends_with(':') {
        (tokens[7].trim_end_matches(':'), 8)
    } else if tokens.get(8) == Some(&":") {
        (tokens[7], 9)
    } else {
        return Err(err(ScenarioErrorKind::Syntax, line_no, "element must be followed by `:`"));
    };
    let elem: usize = elem_token
        .parse()
        .map_err(|_| err(ScenarioErrorKind::Syntax, line_no, "bad deck element index"))?;
    if elem >= cover.deck().order() {
        return Err(err(
            ScenarioErrorKind::Invariant,
            line_no,
            format!("deck element {elem} out of range"),
        ));
    }
    let aut = resolve_aut_spec(group, &tokens[spec_start..])
        .map_err(|m| err(ScenarioErrorKind::Syntax, line_no, m))?;
    let deck_order = cover.deck().order();
    let identity: Vec<usize> = (0..group.order()).collect();
    use std::collections::btree_map::Entry;
    match scenario.deckactions.entry(name) {
        Entry::Vacant(v) => {
            let mut phi = vec![identity; deck_order];
            phi[elem] = aut;
            v.insert(DeckActionDecl { cover: cover_name, group: group_name, phi });
        }
        Entry::Occupied(mut o) => {
            let decl = o.get_mut();
            if decl.cover != cover_name || decl.group != group_name {
                return Err(err(
                    ScenarioErrorKind::Syntax,
                    line_no,
                    "deckaction lines for one name must agree on cover and group",
                ));
            }
            decl.phi[elem] = aut;
        }
    }
    Ok(())
}

fn parse_bundle(
    parts: &mut BTreeMap<String, (String, usize, BTreeMap<usize, Vec<usize>>)>,
    scenario: &Scenario,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    // bundle <name> base <graph> fibre N
    if tokens.len() != 6 || tokens[2] != "base" || tokens[4] != "fibre" {
        return Err(err(
            ScenarioErrorKind::Syntax,
            line_no,
            "usage: bundle <name> base <graph> fibre N",
        ));
    }
    let name = tokens[1].to_string();
    check_fresh(parts.contains_key(&name) || scenario.bundles.contains_key(&name), &name, line_no)?;
    if !scenario.graphs.contains_key(tokens[3]) {
        return Err(err(
            ScenarioErrorKind::DanglingReference,
            line_no,
            format!("graph `{}` not declared", tokens[3]),
        ));
    }
    let fibre: usize = tokens[5]
        .parse()
        .map_err(|_| err(ScenarioErrorKind::Syntax, line_no, "bad fibre size"))?;
    parts.insert(name, (tokens[3].to_string(), fibre, BTreeMap::new()));
    Ok(())
}

fn parse_transition(
    parts: &mut BTreeMap<String, (String, usize, BTreeMap<usize, Vec<usize>>)>,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    // transition <bundle> <edge> i0 i1 ...
    if tokens.len() < 4 {
        return Err(err(
            ScenarioErrorKind::Syntax,
            line_no,
            "usage: transition <bundle> <edge> i0 i1 ...",
        ));
    }
    let name = tokens[1].to_string();
    let entry = parts.get_mut(&name).ok_or_else(|| {
        err(ScenarioErrorKind::DanglingReference, line_no, format!("bundle `{name}` not declared"))
    })?;
    let edge: usize = tokens[2]
        .parse()
        .map_err(|_| err(ScenarioErrorKind::Syntax, line_no, "bad edge index"))?;
    let map = parse_ints(&tokens[3..].join(" "))
        .map_err(|m| err(ScenarioErrorKind::Syntax, line_no, m))?;
    if map.len() != entry.1 {
        return Err(err(
            ScenarioErrorKind::Invariant,
            line_no,
            format!("transition needs {} values", entry.1),
        ));
    }
    entry.2.insert(edge, map);
    Ok(())
}

fn parse_torsor(
    scenario: &mut Scenario,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    // torsor <name> cover <cover> group <group> deckaction <da> rho v0 v1 ...
    if tokens.len() < 9
        || tokens[2] != "cover"
        || tokens[4] != "group"
        || tokens[6] != "deckaction"
        || tokens[8] != "rho"
    {
        return Err(err(
            ScenarioErrorKind::Syntax,
            line_no,
            "usage: torsor <name> cover <c> group <g> deckaction <d> rho v0 v1 ...",
        ));
    }
    let name = tokens[1].to_string();
    check_fresh(scenario.torsors.contains_key(&name), &name, line_no)?;
    for (kind, key) in [("cover", tokens[3]), ("group", tokens[5]), ("deckaction", tokens[7])] {
        let present = match kind {
            "cover" => scenario.covers.contains_key(key),
            "group" => scenario.groups.contains_key(key),
            _ => scenario.deckactions.contains_key(key),
        };
        if !present {
            return Err(err(
                ScenarioErrorKind::DanglingReference,
                line_no,
                format!("{kind} `{key}` not declared"),
            ));
        }
    }
    let rho = parse_ints(&tokens[9..].join(" "))
        .map_err(|m| err(ScenarioErrorKind::Syntax, line_no, m))?;
    scenario.torsors.insert(
        name,
        TorsorDecl {
            cover: tokens[3].to_string(),
            group: tokens[5].to_string(),
            deckaction: tokens[7].to_string(),
            rho,
        },
    );
    Ok(())
}

fn parse_classify(
    scenario: &mut Scenario,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ScenarioError> {
    if tokens.len() < 2 {
        return Err(err(ScenarioErrorKind::Syntax, line_no, "usage: classify <kind> <refs...>"));
    }
    let request = match (tokens[1], tokens.len()) {
        ("torsors", 3) => Request::Torsors { action: tokens[2].into() },
        ("coverings", 4) => {
            Request::Coverings { presentation: tokens[2].into(), group: tokens[3].into() }
        }
        ("cech", 4) => Request::Cech { nerve: tokens[2].into(), group: tokens[3].into() },
        ("compare", 4) => Request::Compare { nerve: tokens[2].into(), group: tokens[3].into() },
        ("oracle", n) if n >= 4 => Request::Oracle {
            action: tokens[2].into(),
            quotient: tokens[3].into(),
            map: tokens[4..].iter().map(|t| t.to_string()).collect(),
        },
        ("holonomy-roundtrip", 5) => Request::HolonomyRoundtrip {
            cover: tokens[2].into(),
            group: tokens[3].into(),
            deckaction: tokens[4].into(),
        },
        ("frame-roundtrip", 4) => {
            Request::FrameRoundtrip { reference: tokens[2].into(), bundle: tokens[3].into() }
        }
        ("gauge", 3) => Request::Gauge { torsor: tokens[2].into() },
        (kind, _) => {
            return Err(err(
                ScenarioErrorKind::Syntax,
                line_no,
                format!("bad classify request `{kind}` or wrong argument count"),
            ))
        }
    };
    scenario.requests.push(request);
    Ok(())
}

fn validate_request(scenario: &Scenario, r: &Request) -> Result<(), ScenarioError> {
    let dangling = |what: &str, name: &str| {
        err(ScenarioErrorKind::DanglingReference, 0, format!("{what} `{name}` not declared"))
    };
    match r {
        Request::Torsors { action } => {
            scenario.actions.get(action).ok_or_else(|| dangling("action", action))?;
        }
        Request::Coverings { presentation, group } => {
            scenario
                .presentations
                .get(presentation)
                .ok_or_else(|| dangling("presentation", presentation))?;
            scenario.groups.get(group).ok_or_else(|| dangling("group", group))?;
        }
        Request::Cech { nerve, group } | Request::Compare { nerve, group } => {
            scenario.nerves.get(nerve).ok_or_else(|| dangling("nerve", nerve))?;
            scenario.groups.get(group).ok_or_else(|| dangling("group", group))?;
        }
        Request::Oracle { action, quotient, .. } => {
            scenario.actions.get(action).ok_or_else(|| dangling("action", action))?;
            scenario.groups.get(quotient).ok_or_else(|| dangling("group", quotient))?;
        }
        Request::HolonomyRoundtrip { cover, group, deckaction } => {
            scenario.covers.get(cover).ok_or_else(|| dangling("cover", cover))?;
            scenario.groups.get(group).ok_or_else(|| dangling("group", group))?;
            scenario.deckactions.get(deckaction).ok_or_else(|| dangling("deckaction", deckaction))?;
        }
        Request::FrameRoundtrip { reference, bundle } => {
            scenario.bundles.get(reference).ok_or_else(|| dangling("bundle", reference))?;
            scenario.bundles.get(bundle).ok_or_else(|| dangling("bundle", bundle))?;
        }
        Request::Gauge { torsor } => {
            scenario.torsors.get(torsor).ok_or_else(|| dangling("torsor", torsor))?;
        }
    }
    Ok(())
}
