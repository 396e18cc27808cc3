pub mod braid;
pub mod brick;
pub mod corpus;
pub mod curves;
pub mod group;
pub mod pipeline;
pub mod render;
pub mod rewrite;
pub mod slopes;
pub mod track;
pub mod verify;
