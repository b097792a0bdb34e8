//! Ring and module definition files (TOML).
//!
//! ```toml
//! [[object]]
//! kind = "ring"
//! name = "R4"
//! zmod = 4
//!
//! [[object]]
//! kind = "module"
//! name = "M4"
//! ring = "R4"
//! side = "left"
//! regular = true
//! ```
//!
//! A ring is given by `zmod = n`, `builtin = "ut2f2" | "f2t2"`, or explicit
//! `carrier_size`, `add_table`, `mul_table` and an optional prime
//! `base_field`. A module names its `ring` and `side` and is given by
//! `regular = true`, `quotient_of_regular = [ideal generators]`,
//! `sum = [module names]`, or explicit `carrier_size`, `add_table`,
//! `action_table` and optional `generators`. Tables are arrays of rows or flat
//! row-major arrays of carrier indices.

use toml::{Table, Value};

use crate::algebra::{
    direct_sum, dual_numbers_f2, ring_zmod, upper_triangular_f2, FiniteModule, FiniteRing, Side,
    Validation,
};
use crate::error::{Error, Result};

/// Loaded objects in file order.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub rings: Vec<(String, FiniteRing)>,
    pub modules: Vec<(String, FiniteModule)>,
}

impl Catalog {
    pub fn ring(&self, name: &str) -> Option<&FiniteRing> {
        self.rings.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }

    pub fn module(&self, name: &str) -> Option<&FiniteModule> {
        self.modules.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    fn contains(&self, name: &str) -> bool {
        self.ring(name).is_some() || self.module(name).is_some()
    }

    /// Axiom scan of every object, rings first.
    pub fn validate_all(&self) -> Vec<(String, Validation)> {
        self.rings
            .iter()
            .map(|(n, r)| (n.clone(), r.validate()))
            .chain(self.modules.iter().map(|(n, m)| (n.clone(), m.validate())))
            .collect()
    }

    /// Adds the objects of `other`; names must stay unique.
    pub fn merge(&mut self, other: Catalog) -> Result<()> {
        for (n, r) in other.rings {
            if self.contains(&n) {
                return Err(Error::invalid_argument(format!("duplicate object name {n}")));
            }
            self.rings.push((n, r));
        }
        for (n, m) in other.modules {
            if self.contains(&n) {
                return Err(Error::invalid_argument(format!("duplicate object name {n}")));
            }
            self.modules.push((n, m));
        }
        Ok(())
    }
}

fn table_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Table {
        path: path.into(),
        message: message.into(),
    }
}

fn get_usize(obj: &Table, key: &str, path: &str) -> Result<Option<usize>> {
    match obj.get(key) {
        None => Ok(None),
        Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
        Some(v) => Err(table_err(
            format!("{path}.{key}"),
            format!("expected a nonnegative integer, found {v}"),
        )),
    }
}

fn get_str<'a>(obj: &'a Table, key: &str, path: &str) -> Result<Option<&'a str>> {
    match obj.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(v) => Err(table_err(format!("{path}.{key}"), format!("expected a string, found {v}"))),
    }
}

fn require<T>(v: Option<T>, path: &str, key: &str) -> Result<T> {
    v.ok_or_else(|| table_err(format!("{path}.{key}"), "missing"))
}

fn int_list(v: &Value, path: &str) -> Result<Vec<usize>> {
    let arr = v
        .as_array()
        .ok_or_else(|| table_err(path, format!("expected an array, found {v}")))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| match x {
            Value::Integer(n) if *n >= 0 => Ok(*n as usize),
            other => Err(table_err(
                format!("{path}[{i}]"),
                format!("expected a nonnegative integer, found {other}"),
            )),
        })
        .collect()
}

/// A `rows x cols` table as nested rows or one flat array; entries checked against `range`.
fn read_table(obj: &Table, key: &str, path: &str, rows: usize, cols: usize, range: usize) -> Result<Vec<usize>> {
    let p = format!("{path}.{key}");
    let v = require(obj.get(key), path, key)?;
    let arr = v
        .as_array()
        .ok_or_else(|| table_err(&p, "expected an array"))?;
    let nested = arr.first().is_some_and(|x| x.is_array());
    let out = if nested {
        if arr.len() != rows {
            return Err(table_err(&p, format!("expected {rows} rows, found {}", arr.len())));
        }
        let mut out = Vec::with_capacity(rows * cols);
        for (i, row) in arr.iter().enumerate() {
            let r = int_list(row, &format!("{p}[{i}]"))?;
            if r.len() != cols {
                return Err(table_err(
                    format!("{p}[{i}]"),
                    format!("expected {cols} entries, found {}", r.len()),
                ));
            }
            out.extend(r);
        }
        out
    } else {
        let flat = int_list(v, &p)?;
        if flat.len() != rows * cols {
            return Err(table_err(&p, format!("expected {} entries, found {}", rows * cols, flat.len())));
        }
        flat
    };
    if let Some((i, &x)) = out.iter().enumerate().find(|(_, &x)| x >= range) {
        return Err(table_err(
            format!("{p}[{}][{}]", i / cols, i % cols),
            format!("value {x} out of range 0..{range}"),
        ));
    }
    Ok(out)
}

fn load_ring(obj: &Table, name: &str, path: &str) -> Result<FiniteRing> {
    if let Some(n) = get_usize(obj, "zmod", path)? {
        return Ok(ring_zmod(n)?.renamed(name));
    }
    if let Some(b) = get_str(obj, "builtin", path)? {
        return match b {
            "ut2f2" => Ok(upper_triangular_f2().renamed(name)),
            "f2t2" => Ok(dual_numbers_f2().renamed(name)),
            other => Err(table_err(format!("{path}.builtin"), format!("unknown builtin ring {other:?}"))),
        };
    }
    let size = require(get_usize(obj, "carrier_size", path)?, path, "carrier_size")?;
    let add = read_table(obj, "add_table", path, size, size, size)?;
    let mul = read_table(obj, "mul_table", path, size, size, size)?;
    let base = get_usize(obj, "base_field", path)?;
    FiniteRing::from_tables_unchecked(name, size, add, mul, base)
}

fn load_module(obj: &Table, name: &str, path: &str, cat: &Catalog) -> Result<FiniteModule> {
    let ring_name = require(get_str(obj, "ring", path)?, path, "ring")?;
    let ring = cat
        .ring(ring_name)
        .ok_or_else(|| table_err(format!("{path}.ring"), format!("unknown ring {ring_name:?}")))?
        .clone();
    let side = match require(get_str(obj, "side", path)?, path, "side")? {
        "left" => Side::Left,
        "right" => Side::Right,
        other => return Err(table_err(format!("{path}.side"), format!("expected left or right, found {other:?}"))),
    };
    if let Some(v) = obj.get("regular") {
        if v.as_bool() != Some(true) {
            return Err(table_err(format!("{path}.regular"), "expected true"));
        }
        return Ok(FiniteModule::regular(&ring, side).with_name(name));
    }
    if let Some(v) = obj.get("quotient_of_regular") {
        let gens = int_list(v, &format!("{path}.quotient_of_regular"))?;
        if let Some((i, &g)) = gens.iter().enumerate().find(|(_, &g)| g >= ring.size()) {
            return Err(table_err(
                format!("{path}.quotient_of_regular[{i}]"),
                format!("{g} is not an element of {}", ring.name()),
            ));
        }
        return Ok(FiniteModule::cyclic_quotient(&ring, side, &gens)?.with_name(name));
    }
    if let Some(v) = obj.get("sum") {
        let p = format!("{path}.sum");
        let names = v
            .as_array()
            .ok_or_else(|| table_err(&p, "expected an array of module names"))?;
        let mut parts = Vec::new();
        for (i, n) in names.iter().enumerate() {
            let n = n
                .as_str()
                .ok_or_else(|| table_err(format!("{p}[{i}]"), "expected a module name"))?;
            parts.push(
                cat.module(n)
                    .ok_or_else(|| table_err(format!("{p}[{i}]"), format!("unknown module {n:?}")))?
                    .clone(),
            );
        }
        return Ok(direct_sum(&ring, side, &parts)?.module.with_name(name));
    }
    let size = require(get_usize(obj, "carrier_size", path)?, path, "carrier_size")?;
    let add = read_table(obj, "add_table", path, size, size, size)?;
    let action = read_table(obj, "action_table", path, ring.size(), size, size)?;
    let gens = obj
        .get("generators")
        .map(|v| int_list(v, &format!("{path}.generators")))
        .transpose()?;
    if let Some(g) = &gens {
        if let Some((i, &x)) = g.iter().enumerate().find(|(_, &x)| x >= size) {
            return Err(table_err(format!("{path}.generators[{i}]"), format!("value {x} out of range")));
        }
    }
    FiniteModule::from_tables_unchecked(name, &ring, side, size, add, action, gens)
}

/// Parses a definition file. Later objects may refer to earlier ones.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    parse_catalog_over(text, &Catalog::default())
}

/// Parses a definition file whose objects may also refer to `base`.
/// Returns only the new objects; their names must not clash with `base`.
pub fn parse_catalog_over(text: &str, base: &Catalog) -> Result<Catalog> {
    let (nr, nm) = (base.rings.len(), base.modules.len());
    let mut cat = base.clone();
    parse_into(text, &mut cat)?;
    Ok(Catalog {
        rings: cat.rings.split_off(nr),
        modules: cat.modules.split_off(nm),
    })
}

fn parse_into(text: &str, cat: &mut Catalog) -> Result<()> {
    let doc: Table = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let Some(objects) = doc.get("object") else {
        return Ok(());
    };
    let objects = objects
        .as_array()
        .ok_or_else(|| table_err("object", "expected an array of tables ([[object]])"))?;
    for (i, o) in objects.iter().enumerate() {
        let path = format!("object[{i}]");
        let obj = o
            .as_table()
            .ok_or_else(|| table_err(&path, "expected a table"))?;
        let name = require(get_str(obj, "name", &path)?, &path, "name")?.to_string();
        if cat.contains(&name) {
            return Err(table_err(format!("{path}.name"), format!("duplicate name {name:?}")));
        }
        match require(get_str(obj, "kind", &path)?, &path, "kind")? {
            "ring" => {
                let r = load_ring(obj, &name, &path)?;
                cat.rings.push((name, r));
            }
            "module" => {
                let m = load_module(obj, &name, &path, cat)?;
                cat.modules.push((name, m));
            }
            other => {
                return Err(table_err(format!("{path}.kind"), format!("expected ring or module, found {other:?}")))
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands() {
        let cat = parse_catalog(
            r#"
[[object]]
kind = "ring"
name = "R4"
zmod = 4

[[object]]
kind = "module"
name = "M4"
ring = "R4"
side = "left"
regular = true

[[object]]
kind = "module"
name = "M2"
ring = "R4"
side = "left"
quotient_of_regular = [2]

[[object]]
kind = "module"
name = "S"
ring = "R4"
side = "left"
sum = ["M2", "M4"]
"#,
        )
        .unwrap();
        assert_eq!(cat.module("S").unwrap().size(), 8);
        assert_eq!(cat.module("M2").unwrap().size(), 2);
        assert!(cat.validate_all().iter().all(|(_, v)| v.is_pass()));
    }

    #[test]
    fn explicit_tables_and_positions() {
        let good = r#"
[[object]]
kind = "ring"
name = "F2"
carrier_size = 2
add_table = [[0, 1], [1, 0]]
mul_table = [0, 0, 0, 1]
base_field = 2
"#;
        assert_eq!(parse_catalog(good).unwrap().ring("F2").unwrap().size(), 2);
        let bad = good.replace("[[0, 1], [1, 0]]", "[[0, 1], [1, 5]]");
        let err = parse_catalog(&bad).unwrap_err().to_string();
        assert!(err.starts_with("object[0].add_table[1][1]"), "{err}");
        let short = good.replace("[[0, 1], [1, 0]]", "[[0, 1], [1]]");
        let err = parse_catalog(&short).unwrap_err().to_string();
        assert!(err.starts_with("object[0].add_table[1]"), "{err}");
        let unknown = "[[object]]\nkind = \"module\"\nname = \"M\"\nring = \"Q\"\nside = \"left\"\nregular = true\n";
        assert!(parse_catalog(unknown).unwrap_err().to_string().contains("unknown ring"));
        assert!(matches!(parse_catalog("[[object]\n"), Err(Error::Parse(_))));
    }
}
