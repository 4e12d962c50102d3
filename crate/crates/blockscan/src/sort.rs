//! Radix sort for f64 slices.
//!
//! Level evaluation sorts tens of millions of z-scores; comparison sorting is
//! the bottleneck there, so this module provides an LSD radix sort over the
//! usual order-preserving bit mapping. The radix path runs in a size window:
//! below it `sort_unstable_by` wins on branch prediction, above it on TLB
//! behavior, and in between the radix sort is several times faster.

/// Order-preserving map: ascending u64 order == ascending f64 order.
#[inline]
fn key_asc(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | 0x8000_0000_0000_0000
    }
}

#[inline]
fn key_to_f64_asc(k: u64) -> f64 {
    let b = if k >> 63 == 1 {
        k & 0x7fff_ffff_ffff_ffff
    } else {
        !k
    };
    f64::from_bits(b)
}

const RADIX_CUTOFF: usize = 1 << 14;

/// Entries staged per bucket before a contiguous flush to the destination.
/// Staging turns the scatter's single random writes into 256-byte block
/// copies, so each cache-line transfer and TLB walk is shared by 32 keys.
const STAGE: usize = 32;

/// Huge page size the scratch buffer aligns to.
const HUGE: usize = 1 << 21;
const HUGE_U64: usize = HUGE / 8;

/// Reusable scratch memory for [`sort_desc`].
///
/// The radix passes walk hundreds of megabytes in bucket order, which
/// thrashes a 4 KB-page TLB; the buffer is therefore aligned to 2 MB and,
/// on Linux, advised to use transparent huge pages before first touch, so
/// the whole working set fits in a handful of TLB entries.
#[derive(Default)]
pub struct SortScratch {
    buf: Vec<u64>,
    off: usize,
    cap: usize,
}

impl SortScratch {
    pub fn new() -> SortScratch {
        SortScratch::default()
    }

    fn get(&mut self, len: usize) -> &mut [u64] {
        if self.cap < len {
            let cap = len.div_ceil(HUGE_U64) * HUGE_U64;
            self.buf = vec![0u64; cap + HUGE_U64];
            self.off = self.buf.as_ptr().align_offset(HUGE);
            assert!(self.off <= HUGE_U64, "alignment within the slack region");
            self.cap = cap;
            #[cfg(target_os = "linux")]
            unsafe {
                libc::madvise(
                    self.buf.as_mut_ptr().add(self.off).cast(),
                    cap * std::mem::size_of::<u64>(),
                    libc::MADV_HUGEPAGE,
                );
            }
        }
        &mut self.buf[self.off..self.off + len]
    }
}

/// Sort descending in place. `scratch` is reused across calls and grown as
/// needed. Not meaningful for NaN inputs.
pub fn sort_desc(data: &mut [f64], scratch: &mut SortScratch) {
    if data.len() < RADIX_CUTOFF {
        data.sort_unstable_by(|a, b| b.total_cmp(a));
        return;
    }
    let n = data.len();
    let s = scratch.get(2 * n + 256 * STAGE);
    let (ab, stage) = s.split_at_mut(2 * n);
    let (a, b) = ab.split_at_mut(n);
    // descending f64 == ascending on the complemented key
    for (dst, &x) in a.iter_mut().zip(data.iter()) {
        *dst = !key_asc(x);
    }
    let final_in_a = radix_sort_u64(a, b, stage);
    let src = if final_in_a { a } else { b };
    for (dst, &k) in data.iter_mut().zip(src.iter()) {
        *dst = key_to_f64_asc(!k);
    }
}

/// LSD radix sort, 8 bits per pass, skipping passes whose byte is constant.
/// `stage` holds 256 * STAGE staging slots. Returns true if the sorted data
/// ended up in `a`.
fn radix_sort_u64(a: &mut [u64], b: &mut [u64], stage: &mut [u64]) -> bool {
    let n = a.len();
    let mut counts = [[0usize; 256]; 8];
    for &k in a.iter() {
        let mut k = k;
        for c in counts.iter_mut() {
            c[(k & 0xff) as usize] += 1;
            k >>= 8;
        }
    }
    let mut in_a = true;
    for (pass, c) in counts.iter().enumerate() {
        if c.iter().any(|&x| x == n) {
            continue; // byte constant across all keys
        }
        let mut offsets = [0usize; 256];
        let mut acc = 0;
        for (o, &cnt) in offsets.iter_mut().zip(c.iter()) {
            *o = acc;
            acc += cnt;
        }
        let shift = 8 * pass;
        let (src, dst): (&[u64], &mut [u64]) = if in_a {
            (&*a, &mut *b)
        } else {
            (&*b, &mut *a)
        };
        let mut fill = [0usize; 256];
        for &k in src {
            let byte = ((k >> shift) & 0xff) as usize;
            let slot = byte * STAGE;
            stage[slot + fill[byte]] = k;
            fill[byte] += 1;
            if fill[byte] == STAGE {
                let o = offsets[byte];
                dst[o..o + STAGE].copy_from_slice(&stage[slot..slot + STAGE]);
                offsets[byte] = o + STAGE;
                fill[byte] = 0;
            }
        }
        for (byte, &len) in fill.iter().enumerate() {
            if len > 0 {
                let o = offsets[byte];
                dst[o..o + len].copy_from_slice(&stage[byte * STAGE..byte * STAGE + len]);
            }
        }
        in_a = !in_a;
    }
    in_a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn check(mut v: Vec<f64>) {
        let mut expect = v.clone();
        expect.sort_unstable_by(|a, b| b.total_cmp(a));
        let mut scratch = SortScratch::new();
        sort_desc(&mut v, &mut scratch);
        assert_eq!(
            v.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            expect.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn agrees_with_std_sort_small() {
        check(vec![]);
        check(vec![1.0]);
        check(vec![3.0, -1.0, 2.0, -0.0, 0.0, f64::INFINITY, -1e300]);
    }

    #[test]
    fn agrees_with_std_sort_large() {
        let n = 100_000; // above the radix cutoff
        let v: Vec<f64> = (0..n).map(|i| rng::normal_at(77, i as u64)).collect();
        check(v);
        // narrow-range data exercises the constant-byte skip
        let w: Vec<f64> = (0..n)
            .map(|i| 0.5 + 1e-9 * rng::uniform_at(3, i as u64))
            .collect();
        check(w);
        // signed mix with exact duplicates
        let d: Vec<f64> = (0..n)
            .map(|i| ((i % 17) as f64 - 8.0) / 4.0)
            .collect();
        check(d);
    }

    #[test]
    fn agrees_with_std_sort_multimillion() {
        // large enough that every staging buffer flushes many times
        let n = (1 << 21) + 17;
        let v: Vec<f64> = (0..n).map(|i| rng::normal_at(78, i as u64)).collect();
        check(v);
    }
}
