//! Finite checks of isotropy: the rational group acting on `X̃_w` and `X_w`,
//! and `U*_w` acting on `U*` by `u ↦ ẇ⁻¹u_1ẇ·u·F(u_1)⁻¹`.

use super::cover::CosetPoint;
use super::flags::kept_positions;
use super::{FlagError, SpecialLinear};
use crate::coxeter::WeylElement;
use crate::field::Fe;
use crate::matrix::Mat;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Serialize)]
pub struct IsotropyReport {
    pub w: String,
    pub level: u32,
    pub cover_points: usize,
    /// Every cover point has trivial stabilizer in `SL_n(GF(q))`.
    pub cover_free: bool,
    pub flag_points: usize,
    pub stabilizer_orders: BTreeSet<usize>,
    pub torus_order: usize,
    pub orders_divide_torus: bool,
    /// Stabilizers are abelian and consist of elements of order prime to `q`.
    pub stabilizers_abelian_semisimple: bool,
}

impl IsotropyReport {
    pub fn pass(&self) -> bool {
        self.cover_free && self.orders_divide_torus && self.stabilizers_abelian_semisimple
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UStarReport {
    pub w: String,
    pub level: u32,
    pub ustar_size: usize,
    pub subgroup_size: usize,
    pub free: bool,
    pub ustar_orbits: usize,
    pub cover_points: usize,
    pub cover_orbits: usize,
    /// `U*_w`-orbits met by `u = ẇ⁻¹g'⁻¹F(g')` from the cover points.
    pub ustar_orbits_hit: usize,
    /// Points in one rational orbit map into one `U*_w`-orbit.
    pub well_defined: bool,
    /// Distinct rational orbits map to distinct `U*_w`-orbits.
    pub injective: bool,
}

impl UStarReport {
    pub fn pass(&self) -> bool {
        self.free
            && self.well_defined
            && self.injective
            && self.cover_orbits == self.ustar_orbits_hit
    }
}

fn unitriangular(sl: &SpecialLinear, positions: &[(usize, usize)]) -> Vec<Mat> {
    let q = sl.field_size();
    let total = q.pow(positions.len() as u32);
    (0..total)
        .map(|code| {
            let mut u = Mat::identity(sl.n());
            let mut c = code;
            for &(a, b) in positions {
                u.set(a, b, Fe((c % q) as u32));
                c /= q;
            }
            u
        })
        .collect()
}

fn is_semisimple_order(sl: &SpecialLinear, g: &Mat) -> bool {
    let mut x = g.clone();
    let mut k: u32 = 1;
    while !x.is_identity() {
        x = sl.mul(&x, g);
        k += 1;
    }
    !k.is_multiple_of(sl.q())
}

impl SpecialLinear {
    /// Isotropy of the rational group on the cover and on `X_w` at this level.
    pub fn isotropy_check(&self, w: &WeylElement) -> Result<IsotropyReport, FlagError> {
        let group = self.rational_group();
        let cover = self.x_tilde_points(w);
        let cover_free = cover.iter().all(|p| {
            group
                .iter()
                .filter(|x| !x.is_identity())
                .all(|x| self.coset(w, &self.mul(x, p.representative())) != *p)
        });
        let flags = self.x_w_points(w);
        let torus_order = self.torus(w)?.order();
        let mut stabilizer_orders = BTreeSet::new();
        let mut abelian_semisimple = true;
        for b in &flags {
            let stab: Vec<&Mat> = group.iter().filter(|x| self.act(x, b) == *b).collect();
            stabilizer_orders.insert(stab.len());
            let commute = stab
                .iter()
                .all(|x| stab.iter().all(|y| self.mul(x, y) == self.mul(y, x)));
            abelian_semisimple &= commute && stab.iter().all(|x| is_semisimple_order(self, x));
        }
        Ok(IsotropyReport {
            w: self.sys.format_element(w),
            level: self.level,
            cover_points: cover.len(),
            cover_free,
            flag_points: flags.len(),
            orders_divide_torus: stabilizer_orders.iter().all(|&k| torus_order % k == 0),
            stabilizer_orders,
            torus_order,
            stabilizers_abelian_semisimple: abelian_semisimple,
        })
    }

    /// `ẇ⁻¹u_1ẇ·u·F(u_1)⁻¹`.
    pub fn ustar_act(&self, w: &WeylElement, u1: &Mat, u: &Mat) -> Mat {
        let wd = self.tits(w);
        let conj = self.mul(&self.mul(&self.inverse(&wd), u1), &wd);
        self.mul(&self.mul(&conj, u), &self.inverse(&self.frobenius(u1)))
    }

    /// Freeness of the `U*_w`-action on `U*` at this level and the
    /// correspondence between rational orbits on the cover and `U*_w`-orbits.
    pub fn ustar_action_orbits(&self, w: &WeylElement) -> UStarReport {
        let n = self.n;
        let all: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let ustar = unitriangular(self, &all);
        let sub = unitriangular(self, &kept_positions(&self.perm_of(w)));
        let mut orbit_of: BTreeMap<Mat, usize> = BTreeMap::new();
        let mut free = true;
        let mut orbits = 0;
        for u in &ustar {
            if orbit_of.contains_key(u) {
                continue;
            }
            let images: Vec<Mat> = sub.iter().map(|u1| self.ustar_act(w, u1, u)).collect();
            let distinct: BTreeSet<&Mat> = images.iter().collect();
            free &= distinct.len() == sub.len();
            for img in images {
                orbit_of.insert(img, orbits);
            }
            orbits += 1;
        }

        let group = self.rational_group();
        let cover = self.x_tilde_points(w);
        let mut cover_orbit: BTreeMap<CosetPoint, usize> = BTreeMap::new();
        let mut cover_orbits = 0;
        let mut well_defined = true;
        let mut image_of_orbit: Vec<usize> = Vec::new();
        for p in &cover {
            if cover_orbit.contains_key(p) {
                continue;
            }
            let u = self.cover_unipotent(w, p.representative());
            let target = orbit_of[&u];
            for x in &group {
                let moved = self.coset(w, &self.mul(x, p.representative()));
                let mu = self.cover_unipotent(w, moved.representative());
                well_defined &= orbit_of.get(&mu) == Some(&target);
                cover_orbit.insert(moved, cover_orbits);
            }
            image_of_orbit.push(target);
            cover_orbits += 1;
        }
        let hit: BTreeSet<usize> = image_of_orbit.iter().copied().collect();
        UStarReport {
            w: self.sys.format_element(w),
            level: self.level,
            ustar_size: ustar.len(),
            subgroup_size: sub.len(),
            free,
            ustar_orbits: orbits,
            cover_points: cover.len(),
            cover_orbits,
            ustar_orbits_hit: hit.len(),
            well_defined,
            injective: hit.len() == image_of_orbit.len(),
        }
    }
}
