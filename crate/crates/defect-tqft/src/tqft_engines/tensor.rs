//! Small dense tensors with labelled axes.

use num_complex::Complex64;

use crate::fusion::CMatrix;

#[derive(Debug, Clone)]
pub(crate) struct Tensor {
    pub axes: Vec<usize>,
    pub dims: Vec<usize>,
    pub data: Vec<Complex64>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Calls `f` with every multi-index of `dims`, last index fastest.
fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.iter().any(|&d| d == 0) {
        return;
    }
    let mut idx = vec![0; dims.len()];
    loop {
        f(&idx);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

impl Tensor {
    pub fn scalar(z: Complex64) -> Self {
        Self { axes: vec![], dims: vec![], data: vec![z] }
    }

    pub fn new(axes: Vec<usize>, dims: Vec<usize>, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), data.len());
        Self { axes, dims, data }
    }

    fn position(&self, label: usize) -> usize {
        self.axes.iter().position(|&a| a == label).expect("axis label")
    }

    /// Replaces axis `label` by `m · x` along that axis and relabels it.
    pub fn map_axis(&self, label: usize, m: &CMatrix, new_label: usize) -> Tensor {
        let k = self.position(label);
        let st = strides(&self.dims);
        let mut dims = self.dims.clone();
        dims[k] = m.nrows();
        let mut axes = self.axes.clone();
        axes[k] = new_label;
        let nst = strides(&dims);
        let mut data = vec![Complex64::default(); dims.iter().product()];
        for_each_index(&self.dims, |idx| {
            let x = self.data[idx.iter().zip(&st).map(|(i, s)| i * s).sum::<usize>()];
            if x == Complex64::default() {
                return;
            }
            let base: usize = idx.iter().zip(&nst).enumerate().filter(|&(j, _)| j != k).map(|(_, (i, s))| i * s).sum();
            for r in 0..m.nrows() {
                data[base + r * nst[k]] += m[(r, idx[k])] * x;
            }
        });
        Tensor { axes, dims, data }
    }

    /// Sums over every label shared by the two tensors, and over labels
    /// repeated within the result.
    pub fn contract(&self, other: &Tensor) -> Tensor {
        let shared: Vec<usize> = self.axes.iter().copied().filter(|a| other.axes.contains(a)).collect();
        let mut axes = Vec::new();
        let mut dims = Vec::new();
        for (t, which) in [(self, 0), (other, 1)] {
            for (k, &a) in t.axes.iter().enumerate() {
                if !shared.contains(&a) {
                    axes.push((which, k, a));
                    dims.push(t.dims[k]);
                }
            }
        }
        let shared_dims: Vec<usize> = shared.iter().map(|&a| self.dims[self.position(a)]).collect();
        let (sa, sb) = (strides(&self.dims), strides(&other.dims));
        let mut data = Vec::with_capacity(dims.iter().product());
        let pa: Vec<usize> = shared.iter().map(|&a| sa[self.position(a)]).collect();
        let pb: Vec<usize> = shared.iter().map(|&a| sb[other.position(a)]).collect();
        for_each_index(&dims, |idx| {
            let mut oa = 0;
            let mut ob = 0;
            for (&(which, k, _), &i) in axes.iter().zip(idx) {
                if which == 0 {
                    oa += i * sa[k];
                } else {
                    ob += i * sb[k];
                }
            }
            let mut acc = Complex64::default();
            for_each_index(&shared_dims, |j| {
                let ia: usize = j.iter().zip(&pa).map(|(x, s)| x * s).sum();
                let ib: usize = j.iter().zip(&pb).map(|(x, s)| x * s).sum();
                acc += self.data[oa + ia] * other.data[ob + ib];
            });
            data.push(acc);
        });
        if dims.iter().any(|&d| d == 0) {
            data.clear();
        }
        Tensor { axes: axes.iter().map(|x| x.2).collect(), dims, data }.trace_repeated()
    }

    /// Sums the diagonal of any label occurring twice.
    pub fn trace_repeated(self) -> Tensor {
        let Some((k1, k2)) = (0..self.axes.len())
            .flat_map(|i| (i + 1..self.axes.len()).map(move |j| (i, j)))
            .find(|&(i, j)| self.axes[i] == self.axes[j])
        else {
            return self;
        };
        let st = strides(&self.dims);
        let keep: Vec<usize> = (0..self.axes.len()).filter(|&k| k != k1 && k != k2).collect();
        let dims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        let axes: Vec<usize> = keep.iter().map(|&k| self.axes[k]).collect();
        let mut data = Vec::with_capacity(dims.iter().product());
        for_each_index(&dims, |idx| {
            let base: usize = idx.iter().zip(&keep).map(|(i, &k)| i * st[k]).sum();
            let mut acc = Complex64::default();
            for d in 0..self.dims[k1] {
                acc += self.data[base + d * (st[k1] + st[k2])];
            }
            data.push(acc);
        });
        Tensor { axes, dims, data }.trace_repeated()
    }

    /// Data with axes reordered to `order`.
    pub fn permuted(&self, order: &[usize]) -> Vec<Complex64> {
        let pos: Vec<usize> = order.iter().map(|&a| self.position(a)).collect();
        let dims: Vec<usize> = pos.iter().map(|&k| self.dims[k]).collect();
        let st = strides(&self.dims);
        let mut out = Vec::with_capacity(self.data.len());
        for_each_index(&dims, |idx| {
            out.push(self.data[idx.iter().zip(&pos).map(|(i, &k)| i * st[k]).sum::<usize>()]);
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn matrix_product_and_trace() {
        // a[i,j] b[j,k]
        let a = Tensor::new(vec![0, 1], vec![2, 2], vec![c(1.0), c(2.0), c(3.0), c(4.0)]);
        let b = Tensor::new(vec![1, 2], vec![2, 2], vec![c(5.0), c(6.0), c(7.0), c(8.0)]);
        let ab = a.contract(&b);
        assert_eq!(ab.axes, vec![0, 2]);
        assert_eq!(ab.data, vec![c(19.0), c(22.0), c(43.0), c(50.0)]);
        let tr = Tensor::new(vec![3, 3], vec![2, 2], a.data.clone()).trace_repeated();
        assert_eq!(tr.data, vec![c(5.0)]);
        assert_eq!(ab.permuted(&[2, 0]), vec![c(19.0), c(43.0), c(22.0), c(50.0)]);
    }

    #[test]
    fn axis_map() {
        let a = Tensor::new(vec![0, 1], vec![2, 2], vec![c(1.0), c(2.0), c(3.0), c(4.0)]);
        let swap = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let m = a.map_axis(0, &swap, 7);
        assert_eq!(m.axes, vec![7, 1]);
        assert_eq!(m.data, vec![c(3.0), c(4.0), c(1.0), c(2.0)]);
    }
}
