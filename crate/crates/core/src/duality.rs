//! Polar and bipolar duals and the minimal-immersion sequence.
