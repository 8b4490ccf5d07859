//! Random class diagrams and brute-force oracles shared by the integration
//! tests and the acceptance runner. The oracles only read the parsed AST and
//! the raw scope tree; they never call the table's own lookup functions.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use symgen_core::{CdAst, ScopeId, SymbolId, SymbolKind, SymbolTable, TypeForm};

const FIELD_NAMES: &[&str] = &["a", "b", "c", "d", "e"];
const METHOD_NAMES: &[&str] = &["run", "size", "area", "check", "reset"];
const BUILTINS: &[&str] = &["String", "int", "boolean", "double"];
const CONSTANTS: &[&str] = &["RED", "GREEN", "BLUE"];

/// Class diagram source with at most 5 types of at most 5 members each and
/// random acyclic extends edges between classes.
pub fn random_model(rng: &mut ChaCha8Rng) -> String {
    let n = rng.gen_range(1..=5);
    let names: Vec<String> = (0..n).map(|i| format!("T{i}")).collect();
    let forms: Vec<TypeForm> = (0..n)
        .map(|_| match rng.gen_range(0..20) {
            0..=13 => TypeForm::Class,
            14..=16 => TypeForm::Interface,
            _ => TypeForm::Enum,
        })
        .collect();
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(rng);

    let type_ref = |rng: &mut ChaCha8Rng| -> String {
        if rng.gen_bool(0.6) {
            BUILTINS.choose(rng).unwrap().to_string()
        } else {
            names.choose(rng).unwrap().clone()
        }
    };

    let mut out = String::from("classdiagram Random {\n");
    for i in 0..n {
        match forms[i] {
            TypeForm::Enum => {
                let k = rng.gen_range(1..=CONSTANTS.len());
                out.push_str(&format!("  enum {} {{ {} }}\n", names[i], CONSTANTS[..k].join(", ")));
            }
            form => {
                let is_class = form == TypeForm::Class;
                let mut header = String::new();
                if is_class && rng.gen_bool(0.2) {
                    header.push_str("abstract ");
                }
                header.push_str(if is_class { "class " } else { "interface " });
                header.push_str(&names[i]);
                if is_class && rng.gen_bool(0.6) {
                    let supers: Vec<usize> = (0..n)
                        .filter(|&j| forms[j] == TypeForm::Class && rank[j] < rank[i])
                        .collect();
                    if let Some(&j) = supers.choose(rng) {
                        header.push_str(&format!(" extends {}", names[j]));
                    }
                }
                let members = rng.gen_range(0..=5);
                let mut fields: Vec<&str> = FIELD_NAMES.to_vec();
                let mut methods: Vec<&str> = METHOD_NAMES.to_vec();
                fields.shuffle(rng);
                methods.shuffle(rng);
                let mut body = Vec::new();
                for _ in 0..members {
                    if is_class && rng.gen_bool(0.6) {
                        let name = fields.pop().unwrap();
                        body.push(format!("{} {};", type_ref(rng), name));
                    } else {
                        let name = methods.pop().unwrap();
                        let ret = if rng.gen_bool(0.3) { "void".to_string() } else { type_ref(rng) };
                        let params: Vec<String> = (0..rng.gen_range(0..=2))
                            .map(|p| format!("{} p{p}", type_ref(rng)))
                            .collect();
                        body.push(format!("{ret} {name}({});", params.join(", ")));
                    }
                }
                out.push_str(&format!("  {header} {{ {} }}\n", body.join(" ")));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Independent kind compatibility: a query for `JAVA_TYPE` accepts the three
/// concrete Java type kinds, every other query needs the exact kind.
pub fn kind_matches(actual: SymbolKind, query: SymbolKind) -> bool {
    use SymbolKind::*;
    match query {
        JavaType => matches!(actual, JavaType | JavaClass | JavaInterface | JavaEnum),
        CdType => actual == CdType,
        CdField => actual == CdField,
        CdMethod => actual == CdMethod,
        JavaClass => actual == JavaClass,
        JavaInterface => actual == JavaInterface,
        JavaEnum => actual == JavaEnum,
        JavaField => actual == JavaField,
        JavaMethod => actual == JavaMethod,
    }
}

/// Scope path from the root, e.g. `["cd2java", "Book"]`.
pub type ScopePath = Vec<String>;

/// The scope tree a model should produce, derived from the AST alone:
/// global types, one scope per type with its members, and for every
/// generator that ran `map-defaults` a scope mirroring the model in Java
/// kinds.
pub struct ExpectedTree {
    pub scopes: BTreeMap<ScopePath, Vec<(String, SymbolKind)>>,
}

impl ExpectedTree {
    pub fn new(ast: &CdAst, mapped_generators: &[&str]) -> Self {
        let mut scopes = BTreeMap::new();
        scopes.insert(
            vec![],
            ast.types.iter().map(|t| (t.name.clone(), SymbolKind::CdType)).collect(),
        );
        for t in &ast.types {
            let mut members: Vec<(String, SymbolKind)> =
                t.fields.iter().map(|f| (f.name.clone(), SymbolKind::CdField)).collect();
            members.extend(t.methods.iter().map(|m| (m.name.clone(), SymbolKind::CdMethod)));
            scopes.insert(vec![t.name.clone()], members);
        }
        for gen in mapped_generators {
            let types = ast
                .types
                .iter()
                .map(|t| {
                    let kind = match t.form {
                        TypeForm::Class => SymbolKind::JavaClass,
                        TypeForm::Interface => SymbolKind::JavaInterface,
                        TypeForm::Enum => SymbolKind::JavaEnum,
                    };
                    (t.name.clone(), kind)
                })
                .collect();
            scopes.insert(vec![gen.to_string()], types);
            for t in &ast.types {
                let mut members: Vec<(String, SymbolKind)> =
                    t.fields.iter().map(|f| (f.name.clone(), SymbolKind::JavaField)).collect();
                members.extend(t.methods.iter().map(|m| (m.name.clone(), SymbolKind::JavaMethod)));
                scopes.insert(vec![gen.to_string(), t.name.clone()], members);
            }
        }
        ExpectedTree { scopes }
    }

    /// Brute-force scope-chain scan: the innermost scope on the path from
    /// `from` to the root holding a matching entry.
    pub fn resolve(&self, name: &str, query: SymbolKind, from: &ScopePath) -> Option<(ScopePath, String, SymbolKind)> {
        let mut path = from.clone();
        loop {
            if let Some(entries) = self.scopes.get(&path) {
                for (n, k) in entries {
                    if n == name && kind_matches(*k, query) {
                        return Some((path.clone(), n.clone(), *k));
                    }
                }
            }
            path.pop()?;
        }
    }

    pub fn all_names(&self) -> BTreeSet<String> {
        self.scopes
            .iter()
            .flat_map(|(path, entries)| path.iter().cloned().chain(entries.iter().map(|(n, _)| n.clone())))
            .collect()
    }
}

/// Path of names from the root to `scope`, read from the raw tree.
pub fn scope_path(st: &SymbolTable, scope: ScopeId) -> ScopePath {
    let mut path = Vec::new();
    let mut cursor = Some(scope);
    while let Some(s) = cursor {
        if let Some(name) = &st.scope(s).name {
            path.push(name.clone());
        }
        cursor = st.scope(s).enclosing;
    }
    path.reverse();
    path
}

/// The table's scope tree as path -> entries.
pub fn actual_tree(st: &SymbolTable) -> BTreeMap<ScopePath, Vec<(String, SymbolKind)>> {
    st.scope_ids()
        .map(|s| {
            let entries = st
                .scope(s)
                .symbols
                .iter()
                .map(|&id| (st.symbol(id).name.clone(), st.symbol(id).kind))
                .collect();
            (scope_path(st, s), entries)
        })
        .collect()
}

pub fn describe(st: &SymbolTable, id: SymbolId) -> (ScopePath, String, SymbolKind) {
    let sym = st.symbol(id);
    (scope_path(st, sym.scope), sym.name.clone(), sym.kind)
}

/// Brute-force field lookup along the AST's extends chain, starting at the
/// type `owner`. Returns the declaring type's name.
pub fn inherited_field_owner(ast: &CdAst, owner: &str, field: &str) -> Option<String> {
    let mut current = ast.types.iter().find(|t| t.name == owner);
    let mut steps = 0;
    while let Some(t) = current {
        if t.fields.iter().any(|f| f.name == field) {
            return Some(t.name.clone());
        }
        steps += 1;
        if steps > ast.types.len() {
            return None;
        }
        current = t
            .super_name
            .as_ref()
            .and_then(|s| ast.types.iter().find(|t| &t.name == s));
    }
    None
}

/// Whether some proper ancestor of `owner` declares a field named `field`.
pub fn field_is_shadowing(ast: &CdAst, owner: &str, field: &str) -> bool {
    let parent = ast
        .types
        .iter()
        .find(|t| t.name == owner)
        .and_then(|t| t.super_name.clone());
    match parent {
        Some(p) => inherited_field_owner(ast, &p, field).is_some(),
        None => false,
    }
}

/// Mismatches between `resolve` and the scope-chain oracle over every
/// (name, kind, scope) triple, plus the number of triples checked.
pub fn resolve_mismatches(st: &SymbolTable, expected: &ExpectedTree) -> (Vec<String>, usize) {
    let mut problems = Vec::new();
    let mut checked = 0;
    let mut names = expected.all_names();
    names.insert("missing".into());
    for scope in st.scope_ids() {
        let from = scope_path(st, scope);
        for name in &names {
            for kind in SymbolKind::ALL {
                checked += 1;
                let got = st.resolve(name, kind, scope).ok().map(|id| describe(st, id));
                let want = expected.resolve(name, kind, &from);
                if got != want {
                    problems.push(format!("resolve({name}, {kind}, {from:?}): got {got:?}, want {want:?}"));
                }
            }
        }
    }
    (problems, checked)
}

/// Mismatches between `resolve_field_considering_inheritance` and the
/// extends-chain oracle, from every scope.
pub fn inheritance_mismatches(st: &SymbolTable, ast: &CdAst) -> (Vec<String>, usize) {
    let mut problems = Vec::new();
    let mut checked = 0;
    let mut names: BTreeSet<String> = FIELD_NAMES.iter().map(|s| s.to_string()).collect();
    names.extend(ast.types.iter().flat_map(|t| t.fields.iter().map(|f| f.name.clone())));
    for scope in st.scope_ids() {
        let path = scope_path(st, scope);
        let cd_owner = match path.as_slice() {
            [t] if ast.types.iter().any(|n| &n.name == t) => Some(t.clone()),
            _ => None,
        };
        for name in &names {
            checked += 1;
            let got = st
                .resolve_field_considering_inheritance(name, scope)
                .ok()
                .map(|id| describe(st, id));
            let want = cd_owner
                .as_ref()
                .and_then(|owner| inherited_field_owner(ast, owner, name))
                .map(|declaring| (vec![declaring], name.clone(), SymbolKind::CdField));
            if got != want {
                problems.push(format!("inherited({name}, {path:?}): got {got:?}, want {want:?}"));
            }
        }
    }
    (problems, checked)
}

/// Mismatches between every CD field's `shadows` flag and the oracle.
pub fn shadowing_mismatches(st: &SymbolTable, ast: &CdAst) -> (Vec<String>, usize) {
    let mut problems = Vec::new();
    let mut checked = 0;
    for id in st.symbol_ids() {
        let sym = st.symbol(id);
        if sym.kind != SymbolKind::CdField {
            continue;
        }
        checked += 1;
        let owner = scope_path(st, sym.scope).pop().expect("fields live in type scopes");
        let want = field_is_shadowing(ast, &owner, &sym.name);
        if sym.shadows != want {
            problems.push(format!("{owner}.{}: shadows={} want {want}", sym.name, sym.shadows));
        }
    }
    (problems, checked)
}

/// Concrete classes of a model, in document order.
pub fn concrete_classes(ast: &CdAst) -> Vec<String> {
    ast.types
        .iter()
        .filter(|t| t.form == TypeForm::Class && !t.is_abstract)
        .map(|t| t.name.clone())
        .collect()
}

/// `map-defaults`, usually `add-accessors`, then factories and singletons on
/// random concrete classes.
pub fn random_transforms(rng: &mut ChaCha8Rng, ast: &CdAst) -> Vec<symgen_core::TransformSpec> {
    use symgen_core::TransformSpec;
    let mut specs = vec![TransformSpec::MapDefaults];
    if rng.gen_bool(0.8) {
        specs.push(TransformSpec::AddAccessors);
    }
    for class in concrete_classes(ast) {
        match rng.gen_range(0..4) {
            0 => specs.push(TransformSpec::Factory(class)),
            1 => specs.push(TransformSpec::Singleton(class)),
            _ => {}
        }
    }
    specs
}

/// One generation-time API call issued under generator `gen` (0 or 1).
#[derive(Debug, Clone)]
pub struct GenOp {
    pub gen: usize,
    pub action: Action,
}

#[derive(Debug, Clone)]
pub enum Action {
    MapType(String),
    MapField(String),
    MapMethod(String),
    Instantiation(String),
    Forbid(String),
    Accessor(String),
    Mutator(String),
}

/// Random API calls over the CD symbols of `ast`, in random order, so some
/// of them run before their prerequisites.
pub fn random_ops(rng: &mut ChaCha8Rng, ast: &CdAst, len: usize) -> Vec<GenOp> {
    let types: Vec<&str> = ast.types.iter().map(|t| t.name.as_str()).collect();
    let fields: Vec<String> = ast
        .types
        .iter()
        .flat_map(|t| t.fields.iter().map(move |f| format!("{}.{}", t.name, f.name)))
        .collect();
    let methods: Vec<String> = ast
        .types
        .iter()
        .flat_map(|t| t.methods.iter().map(move |m| format!("{}.{}", t.name, m.name)))
        .collect();
    (0..len)
        .map(|_| {
            let gen = rng.gen_range(0..2);
            let ty = types.choose(rng).unwrap().to_string();
            let action = match rng.gen_range(0..7) {
                0 | 1 => Action::MapType(ty),
                2 if !fields.is_empty() => Action::MapField(fields.choose(rng).unwrap().clone()),
                3 if !methods.is_empty() => Action::MapMethod(methods.choose(rng).unwrap().clone()),
                4 => Action::Instantiation(ty),
                5 => Action::Forbid(ty),
                _ if !fields.is_empty() && rng.gen_bool(0.5) => Action::Accessor(fields.choose(rng).unwrap().clone()),
                _ if !fields.is_empty() => Action::Mutator(fields.choose(rng).unwrap().clone()),
                _ => Action::MapType(ty),
            };
            GenOp { gen, action }
        })
        .collect()
}

/// Java name generator `gen` uses for CD element `name`: the two generators
/// deliberately disagree.
pub fn java_name(gen: usize, name: &str) -> String {
    if gen == 0 {
        name.to_string()
    } else {
        format!("J{name}")
    }
}

/// Applies `op`; returns the error code on failure.
pub fn apply_op(st: &mut SymbolTable, gens: &[symgen_core::GeneratorId], op: &GenOp) -> Result<(), &'static str> {
    use symgen_core::{InstantiationStrategy, Role};
    let gen = &gens[op.gen];
    let member_name = |path: &str| path.split_once('.').unwrap().1.to_string();
    let result = (|| -> symgen_core::Result<()> {
        match &op.action {
            Action::MapType(t) => {
                st.to_java_type(st.cd_type(t)?, &java_name(op.gen, t), gen)?;
            }
            Action::MapField(p) => {
                st.to_java_field(st.resolve_cd_path(p)?, &java_name(op.gen, &member_name(p)), gen)?;
            }
            Action::MapMethod(p) => {
                st.to_java_method(st.resolve_cd_path(p)?, &java_name(op.gen, &member_name(p)), gen)?;
            }
            Action::Instantiation(t) => {
                let java = st.lookup_mapping(st.cd_type(t)?, gen, Role::TypeOf)?;
                st.add_instantiation(java, &format!("{}Factory.create()", java_name(op.gen, t)))?;
            }
            Action::Forbid(t) => {
                let java = st.lookup_mapping(st.cd_type(t)?, gen, Role::TypeOf)?;
                st.forbid_direct_instantiation(java, InstantiationStrategy::Singleton)?;
            }
            Action::Accessor(p) => {
                let java = st.lookup_mapping(st.resolve_cd_path(p)?, gen, Role::FieldOf)?;
                st.set_accessor(java, &format!("get{}", java_name(op.gen, &member_name(p))))?;
            }
            Action::Mutator(p) => {
                let java = st.lookup_mapping(st.resolve_cd_path(p)?, gen, Role::FieldOf)?;
                st.set_mutator(java, &format!("set{}", java_name(op.gen, &member_name(p))))?;
            }
        }
        Ok(())
    })();
    result.map_err(|e| e.code())
}

/// Mapped target as seen through one generator: qualified name, kind, info.
pub type ViewTarget = (String, SymbolKind, Option<symgen_core::GeneratorInfo>);

/// Everything visible through generator `gen`: for every CD symbol and role,
/// the mapped target's qualified name, kind and generator info.
pub fn generator_view(st: &SymbolTable, gen: &symgen_core::GeneratorId) -> Vec<(String, symgen_core::Role, Option<ViewTarget>)> {
    use symgen_core::Role;
    let roles = [
        Role::TypeOf,
        Role::FieldOf,
        Role::AccessorOf,
        Role::MutatorOf,
        Role::MethodOf,
        Role::BackingFieldOf,
    ];
    let mut view = Vec::new();
    for id in st.symbol_ids() {
        if !st.symbol(id).kind.is_cd() {
            continue;
        }
        for role in roles {
            let target = st.try_lookup_mapping(id, gen, role).map(|t| {
                let sym = st.symbol(t);
                (st.qualified_name(t), sym.kind, sym.generator_info.clone())
            });
            view.push((st.qualified_name(id), role, target));
        }
    }
    view
}

/// Runs `ops` interleaved on one table and, separately, each generator's
/// own ops on a fresh table. Returns a description of the first difference.
pub fn isolation_violation(ast: &CdAst, ops: &[GenOp]) -> Option<String> {
    let fresh = || {
        let mut st = symgen_core::build_symbol_table(ast).unwrap();
        let gens = vec![st.register_generator("g0").unwrap(), st.register_generator("g1").unwrap()];
        (st, gens)
    };
    let (mut shared, gens) = fresh();
    let mut solo: Vec<(SymbolTable, Vec<symgen_core::GeneratorId>)> = vec![fresh(), fresh()];
    for (step, op) in ops.iter().enumerate() {
        let other = 1 - op.gen;
        let other_before = generator_view(&shared, &gens[other]);
        let got = apply_op(&mut shared, &gens, op);
        let (solo_st, solo_gens) = &mut solo[op.gen];
        let want = apply_op(solo_st, solo_gens, op);
        if got != want {
            return Some(format!("step {step} {op:?}: interleaved {got:?}, alone {want:?}"));
        }
        if generator_view(&shared, &gens[other]) != other_before {
            return Some(format!("step {step} {op:?} changed generator g{other}"));
        }
        if generator_view(&shared, &gens[op.gen]) != generator_view(solo_st, &solo_gens[op.gen]) {
            return Some(format!("step {step} {op:?}: g{} differs from its solo run", op.gen));
        }
    }
    None
}
