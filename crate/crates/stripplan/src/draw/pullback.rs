//! Pullback of a staged drawing through the reduction trace (placeholder).
