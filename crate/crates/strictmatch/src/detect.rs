//! Surface post-processing: threshold, label connected groups, take centers
//! of mass.

use crate::error::{Error, Result};
use crate::spectral::RealSurface;

/// Neighborhood rule for grouping above-threshold lags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub fn as_u8(self) -> u8 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }
}

/// How component centers are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// Weighted by surface value: the center of mass of the gray blob.
    Intensity,
    /// Every pixel counts once: the geometric center of the component.
    Uniform,
}

/// Binary raster produced by thresholding a surface. Carries the absolute
/// threshold that produced it so downstream artifacts can report it.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    width: usize,
    height: usize,
    threshold: f64,
    bits: Vec<bool>,
}

impl Mask {
    pub fn from_bits(width: usize, height: usize, threshold: f64, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyRaster);
        }
        let expected = width * height;
        if bits.len() != expected {
            return Err(Error::RasterSize {
                width,
                height,
                expected,
                got: bits.len(),
            });
        }
        Ok(Self {
            width,
            height,
            threshold,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Absolute threshold T that selected these pixels.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Component labels, dense `1..=count`, numbered by the row-major position of
/// each component's first pixel; background is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Labels {
    width: usize,
    height: usize,
    threshold: f64,
    labels: Vec<u32>,
    count: u32,
}

impl Labels {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }
}

/// One detected component.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub id: u32,
    /// Center of mass as a signal-space template-anchor position (the lag of
    /// the template's top-left corner).
    pub anchor: (f64, f64),
    /// The same point shifted by half the template extent, i.e. where the
    /// template's center sits in the signal.
    pub center: (f64, f64),
    pub area: usize,
    /// Sum of surface values over the component.
    pub mass: f64,
    /// Maximum surface value in the component.
    pub peak: f64,
}

/// All detections from one surface, ordered by id.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionSet {
    pub detections: Vec<Detection>,
    /// Absolute threshold used to build the mask.
    pub threshold: f64,
    pub connectivity: Connectivity,
}

/// Marks every lag whose value reaches `fraction` of the surface maximum.
/// A surface with no positive value yields an empty mask.
pub fn threshold_surface(surface: &RealSurface, fraction: f64) -> Result<Mask> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::FractionOutOfRange(fraction));
    }
    let max = surface.max();
    let (threshold, bits) = if max <= 0.0 {
        (0.0, vec![false; surface.values().len()])
    } else {
        let t = fraction * max;
        (t, surface.values().iter().map(|&v| v >= t).collect())
    };
    Mask::from_bits(surface.width(), surface.height(), threshold, bits)
}

// Vector-backed disjoint-set with path halving; used by the two-pass labeler.
struct DisjointSets(Vec<u32>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self((0..n as u32).collect())
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.0[i as usize] != i {
            let parent = self.0[i as usize];
            self.0[i as usize] = self.0[parent as usize];
            i = self.0[i as usize];
        }
        i
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

/// Two-pass connected-component labeling over a binary mask.
pub fn label_components(mask: &Mask, connectivity: Connectivity) -> Labels {
    let (w, h) = (mask.width(), mask.height());
    let mut provisional = vec![0u32; w * h];
    let mut sets = DisjointSets::new(w * h + 1);
    let mut next = 1u32;

    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) {
                continue;
            }
            // Already-visited neighbors: W, N, and for 8-connectivity NW/NE.
            let mut neighbors = [(0usize, 0usize); 4];
            let mut n = 0;
            if x > 0 {
                neighbors[n] = (x - 1, y);
                n += 1;
            }
            if y > 0 {
                neighbors[n] = (x, y - 1);
                n += 1;
                if connectivity == Connectivity::Eight {
                    if x > 0 {
                        neighbors[n] = (x - 1, y - 1);
                        n += 1;
                    }
                    if x + 1 < w {
                        neighbors[n] = (x + 1, y - 1);
                        n += 1;
                    }
                }
            }
            let mut adjacent = [0u32; 4];
            let mut n_adj = 0;
            for &(xx, yy) in &neighbors[..n] {
                if mask.get(xx, yy) {
                    adjacent[n_adj] = provisional[yy * w + xx];
                    n_adj += 1;
                }
            }

            let label = if n_adj == 0 {
                let l = next;
                next += 1;
                l
            } else {
                let mut min = u32::MAX;
                for &a in &adjacent[..n_adj] {
                    min = min.min(a);
                }
                for &a in &adjacent[..n_adj] {
                    sets.union(min, a);
                }
                min
            };
            provisional[y * w + x] = label;
        }
    }

    // Renumber roots densely in order of first row-major appearance.
    let mut dense = vec![0u32; next as usize];
    let mut count = 0u32;
    let mut labels = vec![0u32; w * h];
    for (i, &p) in provisional.iter().enumerate() {
        if p == 0 {
            continue;
        }
        let root = sets.find(p);
        if dense[root as usize] == 0 {
            count += 1;
            dense[root as usize] = count;
        }
        labels[i] = dense[root as usize];
    }

    Labels {
        width: w,
        height: h,
        threshold: mask.threshold(),
        labels,
        count,
    }
}

/// Reduces labeled components to detections with centers of mass.
///
/// Centroids are computed in surface-index space and reported in signal space
/// through the surface origin: `anchor = centroid - origin`. The `center`
/// field additionally shifts by half the template extent, which in linear
/// mode equals `origin / 2`.
pub fn centroids(
    surface: &RealSurface,
    labels: &Labels,
    connectivity: Connectivity,
    weighting: Weighting,
) -> Result<DetectionSet> {
    if (labels.width(), labels.height()) != (surface.width(), surface.height()) {
        return Err(Error::LabelDimsMismatch {
            lw: labels.width(),
            lh: labels.height(),
            sw: surface.width(),
            sh: surface.height(),
        });
    }

    struct Accum {
        wx: f64,
        wy: f64,
        weight: f64,
        mass: f64,
        area: usize,
        peak: f64,
        bbox: (usize, usize, usize, usize), // min x, min y, max x, max y
    }
    let mut acc: Vec<Accum> = (0..labels.count())
        .map(|_| Accum {
            wx: 0.0,
            wy: 0.0,
            weight: 0.0,
            mass: 0.0,
            area: 0,
            peak: f64::NEG_INFINITY,
            bbox: (usize::MAX, usize::MAX, 0, 0),
        })
        .collect();

    for y in 0..surface.height() {
        for x in 0..surface.width() {
            let label = labels.get(x, y);
            if label == 0 {
                continue;
            }
            let v = surface.get(x, y);
            let weight = match weighting {
                Weighting::Intensity => v,
                Weighting::Uniform => 1.0,
            };
            let a = &mut acc[label as usize - 1];
            a.wx += x as f64 * weight;
            a.wy += y as f64 * weight;
            a.weight += weight;
            a.mass += v;
            a.area += 1;
            a.peak = a.peak.max(v);
            a.bbox = (
                a.bbox.0.min(x),
                a.bbox.1.min(y),
                a.bbox.2.max(x),
                a.bbox.3.max(y),
            );
        }
    }

    let origin = surface.origin();
    let half_extent = (origin.0 as f64 / 2.0, origin.1 as f64 / 2.0);
    let mut detections = Vec::with_capacity(acc.len());
    for (i, a) in acc.iter().enumerate() {
        let id = i as u32 + 1;
        if a.weight <= 0.0 {
            return Err(Error::ZeroMassComponent(id));
        }
        // Division can stray a ulp outside the component; the true center of
        // mass always lies inside the bounding box, so pin it there.
        let cx = (a.wx / a.weight).clamp(a.bbox.0 as f64, a.bbox.2 as f64) - origin.0 as f64;
        let cy = (a.wy / a.weight).clamp(a.bbox.1 as f64, a.bbox.3 as f64) - origin.1 as f64;
        detections.push(Detection {
            id,
            anchor: (cx, cy),
            center: (cx + half_extent.0, cy + half_extent.1),
            area: a.area,
            mass: a.mass,
            peak: a.peak,
        });
    }

    Ok(DetectionSet {
        detections,
        threshold: labels.threshold,
        connectivity,
    })
}

/// The full post-processing chain: threshold, label, centers of mass.
pub fn detect_peaks(
    surface: &RealSurface,
    fraction: f64,
    connectivity: Connectivity,
    weighting: Weighting,
) -> Result<DetectionSet> {
    let mask = threshold_surface(surface, fraction)?;
    let labels = label_components(&mask, connectivity);
    centroids(surface, &labels, connectivity, weighting)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(width: usize, height: usize, values: Vec<f64>) -> RealSurface {
        RealSurface::new(width, height, values, (0, 0)).unwrap()
    }

    // The hand-computed 19-lag strict surface of the worked 1D pair.
    fn worked_surface() -> RealSurface {
        let table = vec![
            0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 3.0, 2.0, 5.0, 2.0, 3.0, 2.0, 3.0, 1.0, 1.0, 1.0,
            0.0, 0.0, 0.0,
        ];
        RealSurface::new(19, 1, table, (9, 0)).unwrap()
    }

    #[test]
    fn full_fraction_marks_exactly_the_argmax_set() {
        let s = surface(4, 1, vec![1.0, 9.0, 9.0, 3.0]);
        let mask = threshold_surface(&s, 1.0).unwrap();
        assert_eq!(mask.bits(), &[false, true, true, false]);
        assert_eq!(mask.threshold(), 9.0);
    }

    #[test]
    fn constant_surface_is_fully_marked_at_any_fraction() {
        let s = surface(3, 2, vec![4.0; 6]);
        for fraction in [0.1, 0.5, 1.0] {
            let mask = threshold_surface(&s, fraction).unwrap();
            assert_eq!(mask.count_ones(), 6);
        }
    }

    #[test]
    fn zero_surface_yields_empty_mask() {
        let s = surface(3, 2, vec![0.0; 6]);
        let mask = threshold_surface(&s, 0.5).unwrap();
        assert_eq!(mask.count_ones(), 0);
    }

    #[test]
    fn fraction_bounds_are_enforced() {
        let s = surface(2, 1, vec![1.0, 2.0]);
        assert!(matches!(
            threshold_surface(&s, 0.0),
            Err(Error::FractionOutOfRange(_))
        ));
        assert!(matches!(
            threshold_surface(&s, 1.5),
            Err(Error::FractionOutOfRange(_))
        ));
    }

    #[test]
    fn worked_surface_at_half_max_marks_the_four_strong_lags() {
        let mask = threshold_surface(&worked_surface(), 0.5).unwrap();
        let marked: Vec<usize> = (0..19).filter(|&i| mask.bits()[i]).collect();
        assert_eq!(marked, vec![6, 8, 10, 12]); // lags -3, -1, 1, 3
        assert_eq!(mask.threshold(), 2.5);
    }

    #[test]
    fn empty_mask_has_zero_components() {
        let mask = Mask::from_bits(4, 4, 1.0, vec![false; 16]).unwrap();
        assert_eq!(label_components(&mask, Connectivity::Eight).count(), 0);
    }

    #[test]
    fn diagonal_pixels_merge_only_under_eight_connectivity() {
        let mut bits = vec![false; 9];
        bits[0] = true; // (0, 0)
        bits[4] = true; // (1, 1)
        let mask = Mask::from_bits(3, 3, 1.0, bits).unwrap();
        assert_eq!(label_components(&mask, Connectivity::Eight).count(), 1);
        assert_eq!(label_components(&mask, Connectivity::Four).count(), 2);
    }

    #[test]
    fn labels_are_dense_and_row_major_ordered() {
        // Two L-shaped components that meet only through unions.
        let rows = [
            [true, false, true, true],
            [true, false, false, true],
            [true, true, false, true],
        ];
        let bits: Vec<bool> = rows.iter().flatten().copied().collect();
        let mask = Mask::from_bits(4, 3, 1.0, bits).unwrap();
        let labels = label_components(&mask, Connectivity::Four);
        assert_eq!(labels.count(), 2);
        assert_eq!(labels.get(0, 0), 1);
        assert_eq!(labels.get(2, 0), 2);
        assert_eq!(labels.get(3, 2), 2);
        assert_eq!(labels.get(1, 2), 1);
    }

    #[test]
    fn single_pixel_component_centroid_is_exact() {
        let mut values = vec![0.0; 15];
        values[2 * 5 + 3] = 7.0;
        let s = RealSurface::new(5, 3, values, (2, 1)).unwrap();
        let set = detect_peaks(&s, 0.5, Connectivity::Eight, Weighting::Intensity).unwrap();
        assert_eq!(set.detections.len(), 1);
        let d = &set.detections[0];
        assert_eq!(d.anchor, (1.0, 1.0)); // index (3, 2) minus origin (2, 1)
        assert_eq!(d.center, (2.0, 1.5)); // plus half extent (1.0, 0.5)
        assert_eq!(d.peak, 7.0);
        assert_eq!(d.area, 1);
    }

    #[test]
    fn symmetric_plateau_centroid_is_its_geometric_center() {
        let mut values = vec![0.0; 25];
        for y in 1..4 {
            for x in 1..4 {
                values[y * 5 + x] = 4.0;
            }
        }
        let s = surface(5, 5, values);
        let set = detect_peaks(&s, 0.5, Connectivity::Four, Weighting::Intensity).unwrap();
        assert_eq!(set.detections.len(), 1);
        assert_eq!(set.detections[0].anchor, (2.0, 2.0));
        assert_eq!(set.detections[0].area, 9);
        assert_eq!(set.detections[0].mass, 36.0);
    }

    #[test]
    fn uniform_weighting_ignores_intensity_skew() {
        // Two pixels, values 1 and 9: intensity centroid leans right,
        // uniform centroid sits midway.
        let s = surface(2, 1, vec![1.0, 9.0]);
        let intensity = detect_peaks(&s, 0.1, Connectivity::Eight, Weighting::Intensity).unwrap();
        let uniform = detect_peaks(&s, 0.1, Connectivity::Eight, Weighting::Uniform).unwrap();
        assert_eq!(intensity.detections[0].anchor.0, 0.9);
        assert_eq!(uniform.detections[0].anchor.0, 0.5);
        assert_eq!(intensity.detections[0].mass, uniform.detections[0].mass);
    }

    #[test]
    fn worked_surface_detection_carries_peak_five() {
        let set =
            detect_peaks(&worked_surface(), 0.9, Connectivity::Eight, Weighting::Intensity)
                .unwrap();
        assert_eq!(set.detections.len(), 1);
        assert_eq!(set.detections[0].peak, 5.0);
        assert_eq!(set.detections[0].anchor, (-1.0, 0.0));
        assert_eq!(set.threshold, 4.5);
    }

    #[test]
    fn areas_sum_to_mask_population() {
        let s = worked_surface();
        let mask = threshold_surface(&s, 0.4).unwrap();
        let labels = label_components(&mask, Connectivity::Eight);
        let set = centroids(&s, &labels, Connectivity::Eight, Weighting::Intensity).unwrap();
        let total: usize = set.detections.iter().map(|d| d.area).sum();
        assert_eq!(total, mask.count_ones());
    }

    #[test]
    fn centroids_rejects_foreign_labels() {
        let s = surface(3, 1, vec![1.0, 2.0, 3.0]);
        let other = surface(4, 1, vec![1.0; 4]);
        let labels = label_components(&threshold_surface(&other, 0.5).unwrap(), Connectivity::Four);
        assert!(matches!(
            centroids(&s, &labels, Connectivity::Four, Weighting::Intensity),
            Err(Error::LabelDimsMismatch { .. })
        ));
    }
}
