use alloc::string::String;

use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0} does not factor over the declared basis")]
    NotFactorable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("system has {columns} columns, above the configured bound {bound}")]
    TooLarge { columns: usize, bound: usize },
    #[error("no SL2 witness: determinant scaling {0} is not a square")]
    NoSl2Witness(String),
    #[error("operation needs the tower backend")]
    TowerOnly,
}

pub type Result<T> = core::result::Result<T, Error>;
