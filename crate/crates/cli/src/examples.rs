//! The bundled example scenarios. They are ordinary scenario files and can be
//! copied and edited.

pub const EXAMPLE1: &str = include_str!("../scenarios/example1.toml");
pub const EXAMPLE2: &str = include_str!("../scenarios/example2.toml");
pub const EXAMPLE3: &str = include_str!("../scenarios/example3.toml");

pub fn builtin(id: u8) -> Option<&'static str> {
    match id {
        1 => Some(EXAMPLE1),
        2 => Some(EXAMPLE2),
        3 => Some(EXAMPLE3),
        _ => None,
    }
}
