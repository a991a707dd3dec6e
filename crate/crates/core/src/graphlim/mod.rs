//! Graphs, blow-ups, cut distances, cut capacities, homomorphism densities
//! and weighted quotients.

mod cut;
mod graph;
mod graphon;
mod hom;
mod quotient;

pub use cut::{
    cut_capacity_oracle, cut_dist_labeled, cut_dist_labeled_with, cut_dist_unlabeled_upper,
    cut_dist_unlabeled_upper_with, CutNormalization, UnlabeledBound,
};
pub use graph::{blow_up, BlowUp, SimpleGraph, MAX_NODES};
pub use graphon::{graphon_cut_capacity, graphon_cut_oracle, StepGraphon};
pub use hom::{
    hom_count, hom_density, hom_density_step, hom_density_step_with, hom_density_with, tau_oracle,
    tau_oracle_with,
};
pub use quotient::{
    class_masks, cut_quotient, edge_coloring_quotient, edge_coloring_quotient_with,
    gamma_from_kappa, kappa_from_gamma, rounding_partition, weighted_quotient, ColoringQuotient,
    Rounding, WeightedQuotient,
};
