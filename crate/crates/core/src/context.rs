//! Session context: the half-dimension and the declared parameter names.

/// Names and dimensions shared by the parser, the lowering pass and the
/// printer. Parameters are declared once per session; their order fixes
/// the index used by [`crate::ParamScalar::param`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarContext {
    pub n: usize,
    pub params: Vec<String>,
}

impl VarContext {
    pub fn new(n: usize, params: impl IntoIterator<Item = impl Into<String>>) -> Self {
        VarContext {
            n,
            params: params.into_iter().map(Into::into).collect(),
        }
    }

    pub fn without_params(n: usize) -> Self {
        VarContext { n, params: vec![] }
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    pub fn param_name(&self, index: usize) -> Option<&str> {
        self.params.get(index).map(String::as_str)
    }
}
