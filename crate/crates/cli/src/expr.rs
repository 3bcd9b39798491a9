//! Arithmetic expressions inside scenario files, e.g. `"sqrt(3)/2*cos(theta)"`.

use std::collections::BTreeMap;

use evalexpr::{
    build_operator_tree, ContextWithMutableFunctions, ContextWithMutableVariables, DefaultNumericTypes,
    EvalexprError, Function, HashMapContext, Node, Value,
};

use crate::CliError;

type Ctx = HashMapContext<DefaultNumericTypes>;

/// Rewrites bare integer literals as floats (`1/2` would otherwise be integer division).
pub fn promote_integers(src: &str) -> String {
    let chars: Vec<char> = src.chars().collect();
    let mut out = String::with_capacity(src.len() + 8);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let prev_is_word = i > 0 && (chars[i - 1].is_alphanumeric() || chars[i - 1] == '_' || chars[i - 1] == '.');
        // signed exponent such as the `1` in `2e-1`
        let in_exponent = i >= 3
            && matches!(chars[i - 1], '+' | '-')
            && matches!(chars[i - 2], 'e' | 'E')
            && (chars[i - 3].is_ascii_digit() || chars[i - 3] == '.');
        if c.is_ascii_digit() && !prev_is_word && !in_exponent {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.extend(&chars[start..i]);
            let next = chars.get(i).copied();
            let continues = matches!(next, Some(n) if n == '.' || n == 'e' || n == 'E' || n.is_alphanumeric() || n == '_');
            if !continues {
                out.push_str(".0");
            }
            continue;
        }
        out.push(c);
        i += 1;
    }
    out
}

fn unary(f: fn(f64) -> f64) -> Function<DefaultNumericTypes> {
    Function::new(move |arg: &Value<DefaultNumericTypes>| Ok(Value::Float(f(arg.as_number()?))))
}

type Unary = fn(f64) -> f64;

fn base_context() -> Ctx {
    let mut ctx = Ctx::new();
    let functions: [(&str, Unary); 10] = [
        ("sin", f64::sin),
        ("cos", f64::cos),
        ("tan", f64::tan),
        ("asin", f64::asin),
        ("acos", f64::acos),
        ("atan", f64::atan),
        ("sqrt", f64::sqrt),
        ("exp", f64::exp),
        ("ln", f64::ln),
        ("abs", f64::abs),
    ];
    for (name, f) in functions {
        ctx.set_function(name.into(), unary(f)).expect("fresh context");
    }
    ctx.set_value("pi".into(), Value::Float(std::f64::consts::PI)).expect("fresh context");
    ctx.set_value("e".into(), Value::Float(std::f64::consts::E)).expect("fresh context");
    ctx
}

/// Named parameter values visible to expressions, on top of `pi` and `e`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Vars(pub BTreeMap<String, f64>);

impl Vars {
    pub fn with(&self, name: &str, value: f64) -> Self {
        let mut next = self.clone();
        next.0.insert(name.to_owned(), value);
        next
    }

    fn context(&self) -> Ctx {
        let mut ctx = base_context();
        for (k, v) in &self.0 {
            ctx.set_value(k.clone(), Value::Float(*v)).expect("float variable");
        }
        ctx
    }
}

fn compile(src: &str) -> Result<Node<DefaultNumericTypes>, CliError> {
    build_operator_tree(&promote_integers(src)).map_err(|e| expression_error(src, e))
}

fn expression_error(src: &str, e: EvalexprError<DefaultNumericTypes>) -> CliError {
    CliError::Validation(format!("expression `{src}`: {e}"))
}

pub fn eval(src: &str, vars: &Vars) -> Result<f64, CliError> {
    let value = compile(src)?
        .eval_number_with_context(&vars.context())
        .map_err(|e| expression_error(src, e))?;
    if !value.is_finite() {
        return Err(CliError::Validation(format!("expression `{src}` is not finite ({value})")));
    }
    Ok(value)
}

/// Whether `name` is read anywhere in `src`.
pub fn mentions(src: &str, name: &str) -> Result<bool, CliError> {
    Ok(compile(src)?.iter_read_variable_identifiers().any(|v| v == name))
}
