pub mod analytics;
pub mod montecarlo;
pub mod privacy;
pub mod quantum;
pub mod steane;
