//! mathmesh converts mathematical descriptions — parametric surfaces,
//! implicit fields, ODE and map dynamics, polyhedra, voxel layers and
//! heightfields — into validated, watertight, printable triangle meshes,
//! with bit-exact STL/OBJ/SCAD codecs and a catalog of named scenes.

pub mod catalog;
pub mod dynamics;
pub mod error;
pub mod geom;
pub mod implicit;
pub mod io;
mod mc_tables;
mod orient;
pub mod tessellate;
pub mod validate;

pub use error::{MeshError, Result};
pub use geom::{IndexedMesh, Transform, Triangle, Vec3};
