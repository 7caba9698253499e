//! Smith normal form of small integer relation matrices.

/// Diagonal `diag` and a unimodular `v` with `U·R·V = diag(...)`; `v_inv` is
/// V^{-1}. For relations R on generators g, the elements h = V^{-1}g satisfy
/// exactly the relations diag·h = 0.
pub(crate) struct Smith {
    pub diag: Vec<i128>,
    pub v: Vec<Vec<i128>>,
    pub v_inv: Vec<Vec<i128>>,
}

pub(crate) fn smith(rows: &[Vec<i128>], k: usize) -> Smith {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let m = a.len();
    let id = |k: usize| -> Vec<Vec<i128>> {
        (0..k).map(|i| (0..k).map(|j| (i == j) as i128).collect()).collect()
    };
    let mut v = id(k);
    let mut vi = id(k);

    // column ops mirror into V (columns) and V^{-1} (rows)
    fn col_add(a: &mut [Vec<i128>], v: &mut [Vec<i128>], vi: &mut [Vec<i128>], src: usize, dst: usize, c: i128) {
        if c == 0 {
            return;
        }
        for r in a.iter_mut() {
            r[dst] += c * r[src];
        }
        for r in v.iter_mut() {
            r[dst] += c * r[src];
        }
        // V' = V E with E = I + c e_src e_dst^T, so V'^{-1} = (I - c e_src e_dst^T) V^{-1}
        let row_dst = vi[dst].clone();
        for (j, x) in row_dst.iter().enumerate() {
            vi[src][j] -= c * x;
        }
    }
    fn col_swap(a: &mut [Vec<i128>], v: &mut [Vec<i128>], vi: &mut [Vec<i128>], i: usize, j: usize) {
        for r in a.iter_mut() {
            r.swap(i, j);
        }
        for r in v.iter_mut() {
            r.swap(i, j);
        }
        vi.swap(i, j);
    }

    let mut t = 0;
    while t < k.min(m) {
        // pivot: smallest nonzero |entry| in the lower-right block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..k {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        col_swap(&mut a, &mut v, &mut vi, t, pj);
        loop {
            let p = a[t][t];
            let mut done = true;
            for i in t + 1..m {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..k {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    done = false;
                }
            }
            for j in t + 1..k {
                let q = a[t][j] / p;
                col_add(&mut a, &mut v, &mut vi, t, j, -q);
                if a[t][j] != 0 {
                    done = false;
                }
            }
            if done {
                // the pivot must divide the remaining block
                let bad = (t + 1..m).find(|&i| (t + 1..k).any(|j| a[i][j] % p != 0));
                match bad {
                    None => break,
                    Some(i) => {
                        let row = a[i].clone();
                        for j in t..k {
                            a[t][j] += row[j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t into the pivot
            let mut best = (t, t);
            for i in t..m {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..k {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            }
            if best.1 != t {
                col_swap(&mut a, &mut v, &mut vi, t, best.1);
            }
        }
        if a[t][t] < 0 {
            for j in t..k {
                a[t][j] = -a[t][j];
            }
        }
        t += 1;
    }
    let diag = (0..k).map(|i| if i < m { a[i][i] } else { 0 }).collect();
    Smith { diag, v, v_inv: vi }
}
