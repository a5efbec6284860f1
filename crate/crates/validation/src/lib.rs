//! Empty library; the acceptance run lives in `tests/acceptance.rs`.
