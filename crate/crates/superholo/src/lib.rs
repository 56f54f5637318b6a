//! Super lambda-lengths on decorated super Teichmüller space of a polygon, the flat
//! `osp(1|2)` connection on the fatgraph of a triangulation, and the double dimer
//! formulas for its holonomies.

pub mod superalg;
pub mod ospmat;
pub mod surface;
pub mod holonomy;
pub mod snake;
pub mod fib;
pub mod lightcone;
pub mod cli;
