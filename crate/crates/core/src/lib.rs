//! tsim-core: a headless, deterministic outdoor-environment simulator.
//!
//! The engine builds terrain from heightmaps, runs an astronomical day-night
//! cycle, stochastic weather with thunder acoustics, a Gerstner-wave ocean
//! coupled to wind and sky, paged LOD vegetation, and renders scripted camera
//! flythroughs with a built-in software rasterizer. Identical scene + seed
//! always produce identical frames and event timelines.

pub mod assets;
pub mod camera;
pub mod clock;
pub mod demo;
pub mod math;
pub mod node;
pub mod paging;
pub mod particles;
pub mod render;
pub mod rng;
pub mod scene;
pub mod sky;
pub mod state;
pub mod terrain;
pub mod water;
pub mod weather;
pub mod world;
