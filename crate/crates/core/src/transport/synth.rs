use super::decide::decide_majorization;
use super::kernel::TransportKernel;
use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome, LpProblem};
use crate::measures::{sup_dist, DiscreteMeasure};
use crate::tol;

/// Greedy cells of atoms (in lexicographic order) whose pairwise sup-norm
/// distances are at most `cell_diameter`.
pub fn partition_cells(mu: &DiscreteMeasure, cell_diameter: f64) -> Vec<Vec<usize>> {
    let atoms = mu.atoms();
    let mut assigned = vec![false; atoms.len()];
    let mut cells = Vec::new();
    for s in 0..atoms.len() {
        if assigned[s] {
            continue;
        }
        let mut cell = vec![s];
        assigned[s] = true;
        for u in s + 1..atoms.len() {
            if !assigned[u] && cell.iter().all(|&v| sup_dist(&atoms[u].point, &atoms[v].point) <= cell_diameter) {
                cell.push(u);
                assigned[u] = true;
            }
        }
        cells.push(cell);
    }
    cells
}

/// Kernel built cell by cell: split `ν = Σ_j ν_j` with `ν_j ∼ μ|Δ_j`, then
/// `K[s][t] = ν_j({t}) / μ(Δ_j)` for `s ∈ Δ_j`. Row sums and mass balance
/// are exact; each row's barycenter is that of its cell.
pub fn synthesize_kernel_partition(mu: &DiscreteMeasure, nu: &DiscreteMeasure, cell_diameter: f64) -> Result<TransportKernel> {
    if !(cell_diameter >= 0.0) {
        return Err(Error::invalid("cell diameter must be nonnegative"));
    }
    if !decide_majorization(mu, nu)?.feasible {
        return Err(Error::NotMajorized);
    }
    let cells = partition_cells(mu, cell_diameter);
    let (jn, tn, n) = (cells.len(), nu.len(), mu.dim());
    let wm = mu.total_mass();
    let center = mu.barycenter();
    let scale = mu
        .atoms()
        .iter()
        .chain(nu.atoms())
        .flat_map(|a| a.point.iter().zip(&center).map(|(x, c)| (x - c).abs()))
        .fold(1e-300, f64::max);

    let cell_mass: Vec<f64> = cells.iter().map(|c| c.iter().map(|&s| mu.atoms()[s].mass).sum()).collect();
    let mut p = LpProblem::new(jn * tn);
    for (t, b) in nu.atoms().iter().enumerate() {
        let mut r = vec![0.0; jn * tn];
        for j in 0..jn {
            r[j * tn + t] = 1.0;
        }
        p.push_row(r, b.mass / wm);
    }
    for (j, m) in cell_mass.iter().enumerate().take(jn.saturating_sub(1)) {
        let mut r = vec![0.0; jn * tn];
        r[j * tn..(j + 1) * tn].fill(1.0);
        p.push_row(r, m / wm);
    }
    for (j, cell) in cells.iter().enumerate() {
        for i in 0..n {
            let mut r = vec![0.0; jn * tn];
            for (t, b) in nu.atoms().iter().enumerate() {
                r[j * tn + t] = (b.point[i] - center[i]) / scale;
            }
            let rhs = cell.iter().map(|&s| mu.atoms()[s].mass * (mu.atoms()[s].point[i] - center[i])).sum::<f64>();
            p.push_row(r, rhs / (scale * wm));
        }
    }
    let w = match lp::find_feasible(&p, tol::LP)? {
        LpOutcome::Solved(w) => w,
        _ => return Err(Error::Lp("cell split infeasible for a majorized pair".into())),
    };

    let mut k = vec![vec![0.0; tn]; mu.len()];
    for (j, cell) in cells.iter().enumerate() {
        let row: Vec<f64> = (0..tn).map(|t| w[j * tn + t] * wm / cell_mass[j]).collect();
        let sum: f64 = row.iter().sum();
        let row: Vec<f64> = row.iter().map(|v| v / sum).collect();
        for &s in cell {
            k[s] = row.clone();
        }
    }
    TransportKernel::new(mu.clone(), nu.clone(), k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(atoms: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::on_line(atoms).unwrap()
    }

    #[test]
    fn single_atom_cells_give_a_valid_witness() {
        let mu = line(&[(-1.0, 0.5), (1.0, 0.5)]);
        let nu = line(&[(-2.0, 0.5), (2.0, 0.5)]);
        let k = synthesize_kernel_partition(&mu, &nu, 0.5).unwrap();
        assert!(k.is_valid(tol::LP));
        assert!((k.k[0][0] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn dirac_is_one_cell() {
        let k = synthesize_kernel_partition(&line(&[(1.0, 1.0)]), &line(&[(0.0, 0.5), (2.0, 0.5)]), 10.0).unwrap();
        assert!((k.k[0][0] - 0.5).abs() < 1e-12 && (k.k[0][1] - 0.5).abs() < 1e-12);
    }

    // One cell holding both atoms ±1: every row becomes ν/μ(Δ) = (½, ½) with
    // barycenter 0, so each row misses its own point by exactly 1 ≤ 2.
    #[test]
    fn coarse_cell_residual() {
        let mu = line(&[(-1.0, 0.5), (1.0, 0.5)]);
        let nu = line(&[(-2.0, 0.5), (2.0, 0.5)]);
        let k = synthesize_kernel_partition(&mu, &nu, 2.0).unwrap();
        let r = k.residuals();
        assert!(r.row < 1e-15 && r.mass < 1e-15);
        assert!((r.barycenter - 1.0).abs() < 1e-12);
        assert!(r.barycenter <= 2.0);
    }

    #[test]
    fn infeasible_pair_errors() {
        let r = synthesize_kernel_partition(&line(&[(-2.0, 0.5), (2.0, 0.5)]), &line(&[(-1.0, 0.5), (1.0, 0.5)]), 1.0);
        assert!(matches!(r, Err(Error::NotMajorized)));
    }
}
