mod common;

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symgen_core::{
    evaluate, lint_java, parse_cd, parse_template, parse_transform_list, run_pipeline, GenConfig, Generation,
    GeneratorInfo, RenderMode, Role, SymbolKind, TemplateContext, Value,
};

use common::*;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn generate(model: &str, transforms: &str) -> Generation {
    let ast = parse_cd(&read(model), model).unwrap();
    run_pipeline(ast, &GenConfig::with_transforms(parse_transform_list(transforms).unwrap())).unwrap()
}

fn client(g: &Generation, text: &str) -> String {
    let template = parse_template(text, "client").unwrap();
    let templates = symgen_core::TemplateSet::builtin();
    let mut ctx = TemplateContext::new(Value::Type(&g.ast.types[0]), &g.generator, RenderMode::Strict, &g.symtab, &templates);
    evaluate(&template, &mut ctx).unwrap()
}

#[test]
fn running_example_matches_golden_files() {
    let g = generate("bookshop.cd", "map-defaults,add-accessors,factory:Book");
    let names: Vec<String> = g.files.iter().map(|f| f.relative_path.display().to_string()).collect();
    assert_eq!(names, ["Book.java", "BookFactory.java"]);
    for f in &g.files {
        let golden = read(&format!("golden/{}", f.relative_path.display()));
        assert_eq!(f.content, golden, "{}", f.relative_path.display());
        assert_eq!(lint_java(&f.relative_path.display().to_string(), &f.content), vec![]);
    }
}

#[test]
fn running_example_generator_info() {
    let g = generate("bookshop.cd", "map-defaults,add-accessors,factory:Book");
    let book = g.symtab.lookup_mapping(g.symtab.cd_type("Book").unwrap(), &g.generator, Role::TypeOf).unwrap();
    assert_eq!(
        g.symtab.class_info(book).unwrap().instantiation_code.as_deref(),
        Some("BookFactory.create()")
    );
    let title = g
        .symtab
        .lookup_mapping(g.symtab.resolve_cd_path("Book.title").unwrap(), &g.generator, Role::FieldOf)
        .unwrap();
    assert_eq!(g.symtab.field_info(title).unwrap().accessor_code.as_deref(), Some("getTitle"));
    assert_eq!(g.symtab.field_info(title).unwrap().mutator_code.as_deref(), Some("setTitle"));
    assert_eq!(client(&g, "${instantiation(Book)}"), "BookFactory.create()");
    assert_eq!(client(&g, r#"${accessor(Book.title,"b")}"#), "b.getTitle()");
    assert_eq!(client(&g, r#"${mutator(Book.title, "b", "t")}"#), "b.setTitle(t)");
}

#[test]
fn running_example_symbol_table_dump() {
    let g = generate("bookshop.cd", "map-defaults,add-accessors,factory:Book");
    let json: serde_json::Value = serde_json::from_str(&g.symtab.to_json()).unwrap();
    let mappings = json["mappings"].as_array().unwrap();
    assert!(mappings.contains(&serde_json::json!(
        {"source": "Book", "generator": "cd2java", "role": "TYPE_OF", "target": "Book"}
    )));
    assert!(mappings.contains(&serde_json::json!(
        {"source": "Book.title", "generator": "cd2java", "role": "ACCESSOR_OF", "target": "Book.getTitle"}
    )));
    let gen_scope = json["subScopes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["scopeName"] == "cd2java")
        .unwrap();
    assert_eq!(
        gen_scope["symbols"][0]["generatorInfo"],
        serde_json::json!({"instantiation": "BookFactory.create()", "strategy": "FACTORY", "directNew": false})
    );
}

#[test]
fn singleton_matches_golden_file() {
    let g = generate("library.cd", "map-defaults,add-accessors,singleton:Library");
    assert_eq!(g.files.len(), 1);
    assert_eq!(g.files[0].content, read("golden/Library.java"));
    assert_eq!(client(&g, "${instantiation(Library)}"), "Library.getInstance()");
}

#[test]
fn no_accessors_keeps_plain_fields() {
    let ast = parse_cd(&read("bookshop.cd"), "bookshop.cd").unwrap();
    let mut config = GenConfig::with_transforms(parse_transform_list("map-defaults,add-accessors,factory:Book").unwrap());
    config.accessors = false;
    let g = run_pipeline(ast, &config).unwrap();
    assert_eq!(g.files[0].content, "public class Book {\n\n    private String title;\n}\n");
    assert!(g.symtab.mappings().all(|m| !matches!(m.role, Role::AccessorOf | Role::MutatorOf)));
}

/// Every snippet a builtin can emit refers to a symbol that exists in the
/// final table, and the method it names is present in the emitted file.
fn composition_problems(g: &Generation) -> Vec<String> {
    let st = &g.symtab;
    let gen_scope = st.generator_scope(&g.generator).unwrap();
    let file_of = |type_name: &str| {
        g.files
            .iter()
            .find(|f| f.relative_path == Path::new(&format!("{type_name}.java")))
            .map(|f| f.content.as_str())
    };
    let mut problems = Vec::new();
    for id in st.symbol_ids() {
        let sym = st.symbol(id);
        match &sym.generator_info {
            Some(GeneratorInfo::JavaClass(gi)) => {
                let Some(code) = &gi.instantiation_code else { continue };
                let (owner, call) = code.split_once('.').unwrap();
                let method = call.strip_suffix("()").unwrap();
                let found = st
                    .lookup_local(gen_scope, owner, SymbolKind::JavaClass)
                    .and_then(|c| st.symbol(c).spanned_scope)
                    .and_then(|s| st.lookup_local(s, method, SymbolKind::JavaMethod));
                if found.is_none() {
                    problems.push(format!("{}: `{code}` names no generated method", sym.name));
                }
                if !file_of(owner).is_some_and(|text| text.contains(&format!(" {method}() {{"))) {
                    problems.push(format!("{}: `{code}` is not emitted", sym.name));
                }
            }
            Some(GeneratorInfo::JavaField(gi)) => {
                let owner = &st.symbol(st.owner_of(id).unwrap()).name;
                for code in [&gi.accessor_code, &gi.mutator_code].into_iter().flatten() {
                    if st.lookup_local(sym.scope, code, SymbolKind::JavaMethod).is_none() {
                        problems.push(format!("{owner}.{}: `{code}` is not declared", sym.name));
                    }
                    if !file_of(owner).is_some_and(|text| text.contains(&format!(" {code}("))) {
                        problems.push(format!("{owner}.{}: `{code}` is not emitted", sym.name));
                    }
                }
            }
            None => {}
        }
    }
    problems
}

#[test]
fn random_models_generate_valid_composed_code() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let text = random_model(&mut rng);
        let ast = parse_cd(&text, "random.cd").unwrap();
        let transforms = random_transforms(&mut rng, &ast);
        let config = GenConfig::with_transforms(transforms.clone());
        let g = run_pipeline(ast.clone(), &config).unwrap_or_else(|e| panic!("{e}\n{text}\n{transforms:?}"));
        for f in &g.files {
            let name = f.relative_path.display().to_string();
            let findings = lint_java(&name, &f.content);
            assert!(findings.is_empty(), "{name}: {findings:?}\n{}", f.content);
        }
        let problems = composition_problems(&g);
        assert!(problems.is_empty(), "{text}\n{problems:?}");
        let invalid = g.symtab.validate_mappings();
        assert!(invalid.is_empty(), "{text}\n{invalid:?}");

        let again = run_pipeline(ast, &config).unwrap();
        assert_eq!(again.files, g.files);
        assert_eq!(again.symtab.to_json(), g.symtab.to_json());
    }
}

#[test]
fn fallback_mode_is_lint_clean_without_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let text = random_model(&mut rng);
        let mut config = GenConfig::with_transforms(vec![]);
        config.mode = RenderMode::Fallback;
        let g = run_pipeline(parse_cd(&text, "r.cd").unwrap(), &config).unwrap();
        for f in &g.files {
            let name = f.relative_path.display().to_string();
            assert_eq!(lint_java(&name, &f.content), vec![], "{}", f.content);
        }
    }
}
