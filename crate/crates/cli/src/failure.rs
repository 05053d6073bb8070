//! Errors tagged with the process exit status they map to.

pub const INVALID_REPO: u8 = 2;
pub const IO: u8 = 3;
pub const MALFORMED: u8 = 4;
pub const UNKNOWN_KIND: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub status: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(status: u8, error: impl Into<anyhow::Error>) -> Self {
        Self {
            status,
            error: error.into(),
        }
    }
}

pub trait WithStatus<T> {
    fn status(self, status: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> WithStatus<T> for Result<T, E> {
    fn status(self, status: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure::new(status, e))
    }
}
