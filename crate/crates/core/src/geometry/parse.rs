//! Shape literals.
//!
//! ```text
//! shape  := factor ( "*" factor )*
//! factor := "polydisk(" num ("," num)* ")"     sorted product of disks
//!         | "disk(" r ")"
//!         | "ball" dim "(" r ")"               e.g. ball4(2.0)
//!         | "rect(" sides [";" origin] ")"      box, origin defaults to 0
//!         | "sigma(" area ")"
//!         | "cyl(" r ")"                       disk(r) * plane
//!         | "plane"
//!         | "tdisk(" cx "," cy "," r ")"
//! ```

use super::shape::{Factor, ShapeDescriptor};
use crate::error::{Error, Result};

pub fn parse_shape(input: &str) -> Result<ShapeDescriptor> {
    let mut factors = Vec::new();
    for part in split_top_level(input) {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::parse(input.trim(), "empty factor"));
        }
        factors.extend(parse_factor(part)?);
    }
    ShapeDescriptor::new(factors)
}

fn split_top_level(input: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in input.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' | 'x' | '×' if depth == 0 && is_product_sep(input, i, ch) => {
                parts.push(&input[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&input[start..]);
    parts
}

// `x` is a separator only when surrounded by whitespace.
fn is_product_sep(input: &str, i: usize, ch: char) -> bool {
    if ch != 'x' {
        return true;
    }
    let before = input[..i].chars().next_back();
    let after = input[i + 1..].chars().next();
    matches!(before, Some(c) if c.is_whitespace()) && matches!(after, Some(c) if c.is_whitespace())
}

fn parse_num(tok: &str) -> Result<f64> {
    let t = tok.trim();
    t.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::parse(t, "expected a finite number"))
}

fn parse_nums(list: &str) -> Result<Vec<f64>> {
    list.split(',').map(parse_num).collect()
}

fn parse_factor(part: &str) -> Result<Vec<Factor>> {
    if part == "plane" || part == "R2" {
        return Ok(vec![Factor::FullPlane]);
    }
    let open = part
        .find('(')
        .ok_or_else(|| Error::parse(part, "expected `name(args)`"))?;
    if !part.ends_with(')') {
        return Err(Error::parse(part, "missing closing parenthesis"));
    }
    let name = part[..open].trim();
    let args = &part[open + 1..part.len() - 1];
    let one = |what: &str| -> Result<f64> {
        let v = parse_nums(args)?;
        if v.len() != 1 {
            return Err(Error::parse(part, format!("{what} takes one argument")));
        }
        Ok(v[0])
    };
    match name {
        "polydisk" => {
            let radii = parse_nums(args)?;
            Ok(ShapeDescriptor::polydisk(&radii)?.factors().to_vec())
        }
        "disk" => Ok(vec![Factor::Disk2 { radius: one("disk")? }]),
        "sigma" => Ok(vec![Factor::Surface { area: one("sigma")? }]),
        "cyl" => Ok(vec![Factor::Disk2 { radius: one("cyl")? }, Factor::FullPlane]),
        "tdisk" => {
            let v = parse_nums(args)?;
            if v.len() != 3 {
                return Err(Error::parse(part, "tdisk takes (cx, cy, r)"));
            }
            Ok(vec![Factor::TranslatedDisk2 {
                center: [v[0], v[1]],
                radius: v[2],
            }])
        }
        "rect" => {
            let (sides, origin) = match args.split_once(';') {
                Some((s, o)) => (parse_nums(s)?, parse_nums(o)?),
                None => {
                    let s = parse_nums(args)?;
                    let o = vec![0.0; s.len()];
                    (s, o)
                }
            };
            Ok(vec![Factor::Rectangle { sides, origin }])
        }
        _ if name.starts_with("ball") => {
            let dim: usize = name[4..]
                .parse()
                .map_err(|_| Error::parse(name, "ball needs its dimension, e.g. ball4"))?;
            Ok(vec![Factor::Ball {
                dim,
                radius: one("ball")?,
            }])
        }
        _ => Err(Error::parse(name, "unknown shape")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        let p = parse_shape("polydisk(0.1, 1, 1)").unwrap();
        assert_eq!(p.polydisk_radii().unwrap(), vec![0.1, 1.0, 1.0]);
        assert_eq!(parse_shape("ball4(2.0)").unwrap(), ShapeDescriptor::ball(4, 2.0).unwrap());
        assert_eq!(parse_shape("rect(1,40)").unwrap(), ShapeDescriptor::rectangle(&[1.0, 40.0]).unwrap());
        assert_eq!(parse_shape("sigma(1.0)").unwrap(), ShapeDescriptor::surface(1.0).unwrap());
        assert_eq!(parse_shape("cyl(1)").unwrap(), ShapeDescriptor::cylinder(1.0).unwrap());
        let t = parse_shape("disk(1) * tdisk(0, 0.1, 0.2)").unwrap();
        assert_eq!(t.dim(), 4);
        let r = parse_shape("rect(1, 40, 1.4, 1.4; 0, 0, -0.7, -0.7)").unwrap();
        assert_eq!(r.dim(), 4);
        assert_eq!(parse_shape("disk(1) x plane").unwrap(), ShapeDescriptor::cylinder(1.0).unwrap());
    }

    #[test]
    fn errors_name_the_token() {
        match parse_shape("ball4(abc)") {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "abc"),
            other => panic!("{other:?}"),
        }
        match parse_shape("donut(1)") {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "donut"),
            other => panic!("{other:?}"),
        }
        assert!(parse_shape("disk(-1)").is_err());
        assert!(parse_shape("disk(1").is_err());
        assert!(parse_shape("ball3(1)").is_err());
    }

    #[test]
    fn display_round_trips() {
        for lit in [
            "polydisk(0.1, 1, 1)",
            "ball4(2)",
            "sigma(0.01) * disk(0.3)",
            "disk(1) * tdisk(0, 0.1, 0.2)",
            "rect(1, 40, 1.4142135623730951, 1.4142135623730951; 0, 0, -0.7071067811865476, -0.7071067811865476)",
            "disk(2) * plane",
        ] {
            let s = parse_shape(lit).unwrap();
            assert_eq!(parse_shape(&s.to_string()).unwrap(), s, "{lit}");
        }
    }
}
