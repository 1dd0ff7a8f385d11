use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("weight {0} is not a positive finite number")]
    InvalidWeight(f64),
    #[error("self-loop ({0},{0}) rejected")]
    SelfLoop(usize),
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("edge ({0},{1}) already registered")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0},{1}) not registered")]
    UnknownEdge(usize, usize),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("instance has {0} vertices, oracle limit is {1}")]
    InstanceTooLarge(usize, usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
