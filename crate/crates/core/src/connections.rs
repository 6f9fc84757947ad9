//! Flat-connection families attached to harmonic sphere maps.
