//! Spin transforms, conjugate surfaces, and Darboux transforms.
