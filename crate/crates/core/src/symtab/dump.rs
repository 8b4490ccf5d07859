//! JSON rendering of the symbol table, including generator info and the
//! per-generator mappings. Keys appear in document order.

use serde::Serialize;

use crate::genmap::{GeneratorInfo, InstantiationStrategy, Role};

use super::{ScopeId, SymbolKind, SymbolTable};

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ScopeDump<'a> {
    scope_name: Option<&'a str>,
    symbols: Vec<SymbolDump<'a>>,
    sub_scopes: Vec<ScopeDump<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mappings: Option<Vec<MappingDump>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SymbolDump<'a> {
    name: &'a str,
    kind: SymbolKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pos: Option<PosDump>,
    shadows: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator_info: Option<InfoDump<'a>>,
}

#[derive(Serialize)]
struct PosDump {
    line: u32,
    col: u32,
}

#[derive(Serialize)]
#[serde(untagged)]
enum InfoDump<'a> {
    Class {
        #[serde(skip_serializing_if = "Option::is_none")]
        instantiation: Option<&'a str>,
        strategy: InstantiationStrategy,
        #[serde(rename = "directNew", skip_serializing_if = "is_true")]
        direct_new: bool,
    },
    Field {
        #[serde(skip_serializing_if = "Option::is_none")]
        accessor: Option<&'a str>,
        #[serde(skip_serializing_if = "Option::is_none")]
        mutator: Option<&'a str>,
    },
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Serialize)]
struct MappingDump {
    source: String,
    generator: String,
    role: Role,
    target: String,
}

impl SymbolTable {
    fn dump_scope(&self, id: ScopeId) -> ScopeDump<'_> {
        let scope = self.scope(id);
        ScopeDump {
            scope_name: scope.name.as_deref(),
            symbols: scope
                .symbols
                .iter()
                .map(|&s| {
                    let sym = self.symbol(s);
                    SymbolDump {
                        name: &sym.name,
                        kind: sym.kind,
                        pos: sym.pos.as_ref().map(|p| PosDump {
                            line: p.line,
                            col: p.col,
                        }),
                        shadows: sym.shadows,
                        generator_info: sym.generator_info.as_ref().map(|gi| match gi {
                            GeneratorInfo::JavaClass(c) => InfoDump::Class {
                                instantiation: c.instantiation_code.as_deref(),
                                strategy: c.strategy,
                                direct_new: c.direct_new_allowed,
                            },
                            GeneratorInfo::JavaField(f) => InfoDump::Field {
                                accessor: f.accessor_code.as_deref(),
                                mutator: f.mutator_code.as_deref(),
                            },
                        }),
                    }
                })
                .collect(),
            sub_scopes: scope
                .sub_scopes
                .iter()
                .map(|&s| self.dump_scope(s))
                .collect(),
            mappings: None,
        }
    }

    /// Pretty-printed JSON document describing the whole table.
    pub fn to_json(&self) -> String {
        let mut root = self.dump_scope(self.global());
        root.mappings = Some(
            self.mappings()
                .map(|m| MappingDump {
                    source: self.qualified_name(m.source),
                    generator: m.generator.to_string(),
                    role: m.role,
                    target: self.qualified_name(m.target),
                })
                .collect(),
        );
        let mut out = serde_json::to_string_pretty(&root).expect("symbol table dump serializes");
        out.push('\n');
        out
    }
}
