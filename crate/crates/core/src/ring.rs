use std::fmt;

use crate::error::Result;
use crate::ncpoly::NCPoly;
use crate::scalar::Scalar;

/// Coefficient algebra ℬ: polynomials or square matrices of polynomials.
pub trait RingElem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Scalar: Scalar;

    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, c: &Self::Scalar) -> Self;
    /// Entrywise x-derivative by raising x-orders.
    fn ddx(&self) -> Self;
    /// Apply `f` to every polynomial entry.
    fn map_polys(&self, f: &mut dyn FnMut(&NCPoly<Self::Scalar>) -> Result<NCPoly<Self::Scalar>>) -> Result<Self>;
    fn for_each_poly(&self, f: &mut dyn FnMut(&NCPoly<Self::Scalar>));

    fn commutator(&self, o: &Self) -> Self {
        self.mul_ref(o).sub_ref(&o.mul_ref(self))
    }

    fn scale_int(&self, n: i64) -> Self {
        self.scale(&Self::Scalar::from_int(n))
    }
}
