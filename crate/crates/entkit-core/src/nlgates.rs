//! Branch-enumerating simulator for distributed-gate protocols with
//! ebit/cbit resource accounting, plus exact channel-equivalence
//! verification of the shipped teleportation-based constructions.
//!
//! Measurements fork the state into explicit outcome branches (zero
//! probability included), classical control resolves against each
//! branch's transcript, and discarded qubits must factor out exactly —
//! which is precisely what catches a protocol with a missing
//! correction.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

#[allow(unused_imports)]
use crate::fmath::*;
use crate::qla::ComplexMatrix;
use crate::rng::SplitRng;
use crate::states::StateVector;
use crate::{Error, Result};

pub type Party = usize;
pub type QubitId = usize;
pub type CbitId = usize;

#[derive(Clone, Debug)]
pub enum Instruction {
    /// Unitary on qubits owned by a single party.
    Unitary {
        party: Party,
        qubits: Vec<QubitId>,
        matrix: ComplexMatrix,
    },
    /// Applied only on branches whose transcript has the control bit set.
    ControlledUnitary {
        party: Party,
        qubits: Vec<QubitId>,
        matrix: ComplexMatrix,
        control: CbitId,
    },
    /// Projective measurement in the computational basis.
    MeasureZ { qubit: QubitId, cbit: CbitId },
    /// One classical bit of communication.
    Send {
        from: Party,
        to: Party,
        cbit: CbitId,
    },
    /// Initializes a declared pair (one qubit per side) to |φ⁺⟩.
    ConsumeEbit { a: QubitId, b: QubitId },
    /// Removes a qubit; it must be in a product state with the rest.
    Discard { qubit: QubitId },
}

/// Ebits consumed and classical bits sent per ordered party pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResourceLedger {
    pub ebits_consumed: u32,
    pub cbits: BTreeMap<(Party, Party), u32>,
}

impl ResourceLedger {
    pub fn cbits_total(&self) -> u32 {
        self.cbits.values().sum()
    }

    pub fn cbits_between(&self, from: Party, to: Party) -> u32 {
        self.cbits.get(&(from, to)).copied().unwrap_or(0)
    }
}

/// Qubit registry plus ordered instruction list.
#[derive(Clone, Debug)]
pub struct Circuit {
    parties: usize,
    owners: Vec<Party>,
    data_qubits: Vec<QubitId>,
    output_qubits: Vec<QubitId>,
    instructions: Vec<Instruction>,
    cbits: usize,
}

impl Circuit {
    pub fn new(parties: usize) -> Self {
        Circuit {
            parties,
            owners: Vec::new(),
            data_qubits: Vec::new(),
            output_qubits: Vec::new(),
            instructions: Vec::new(),
            cbits: 0,
        }
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn owners(&self) -> &[Party] {
        &self.owners
    }

    pub fn data_qubits(&self) -> &[QubitId] {
        &self.data_qubits
    }

    pub fn output_qubits(&self) -> &[QubitId] {
        if self.output_qubits.is_empty() {
            &self.data_qubits
        } else {
            &self.output_qubits
        }
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn measurement_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::MeasureZ { .. }))
            .count()
    }

    pub fn data_qubit(&mut self, party: Party) -> QubitId {
        let id = self.owners.len();
        self.owners.push(party);
        self.data_qubits.push(id);
        id
    }

    pub fn ancilla(&mut self, party: Party) -> QubitId {
        let id = self.owners.len();
        self.owners.push(party);
        id
    }

    /// Declares which qubits carry the channel output (defaults to the
    /// data qubits; teleportation-style protocols remap).
    pub fn set_output(&mut self, qubits: Vec<QubitId>) {
        self.output_qubits = qubits;
    }

    pub fn unitary(&mut self, party: Party, qubits: &[QubitId], matrix: ComplexMatrix) {
        self.instructions.push(Instruction::Unitary {
            party,
            qubits: qubits.to_vec(),
            matrix,
        });
    }

    pub fn controlled(
        &mut self,
        party: Party,
        qubits: &[QubitId],
        matrix: ComplexMatrix,
        control: CbitId,
    ) {
        self.instructions.push(Instruction::ControlledUnitary {
            party,
            qubits: qubits.to_vec(),
            matrix,
            control,
        });
    }

    pub fn measure(&mut self, qubit: QubitId) -> CbitId {
        let cbit = self.cbits;
        self.cbits += 1;
        self.instructions
            .push(Instruction::MeasureZ { qubit, cbit });
        cbit
    }

    pub fn send(&mut self, from: Party, to: Party, cbit: CbitId) {
        self.instructions.push(Instruction::Send { from, to, cbit });
    }

    pub fn consume_ebit(&mut self, a: QubitId, b: QubitId) {
        self.instructions.push(Instruction::ConsumeEbit { a, b });
    }

    pub fn discard(&mut self, qubit: QubitId) {
        self.instructions.push(Instruction::Discard { qubit });
    }
}

/// One measurement branch: unnormalized state over the live qubits and
/// the classical transcript that produced it.
#[derive(Clone, Debug)]
pub struct Branch {
    pub amplitudes: Vec<Complex64>,
    pub transcript: Vec<Option<bool>>,
}

impl Branch {
    pub fn probability(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// All branches plus the live-qubit order their states refer to.
#[derive(Clone, Debug)]
pub struct BranchSet {
    pub branches: Vec<Branch>,
    pub live_qubits: Vec<QubitId>,
}

impl BranchSet {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(Branch::probability).sum()
    }
}

fn apply_gate(amps: &mut [Complex64], n_live: usize, positions: &[usize], matrix: &ComplexMatrix) {
    let k = positions.len();
    let sub = 1usize << k;
    debug_assert_eq!(matrix.rows(), sub);
    let dim = amps.len();
    let masks: Vec<usize> = positions
        .iter()
        .map(|&p| 1usize << (n_live - 1 - p))
        .collect();
    let mut scratch = vec![Complex64::new(0.0, 0.0); sub];
    for base in 0..dim {
        // Visit each orbit once: all selected bits zero.
        if masks.iter().any(|&m| base & m != 0) {
            continue;
        }
        for (s, slot) in scratch.iter_mut().enumerate() {
            let mut idx = base;
            for (bit, &m) in masks.iter().enumerate() {
                if (s >> (k - 1 - bit)) & 1 == 1 {
                    idx |= m;
                }
            }
            *slot = amps[idx];
        }
        for r in 0..sub {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, &val) in scratch.iter().enumerate() {
                acc += matrix[(r, c)] * val;
            }
            let mut idx = base;
            for (bit, &m) in masks.iter().enumerate() {
                if (r >> (k - 1 - bit)) & 1 == 1 {
                    idx |= m;
                }
            }
            amps[idx] = acc;
        }
    }
}

/// Runs the circuit, splitting on every measurement. The ledger is
/// branch-independent by construction.
pub fn run(circuit: &Circuit, input: &StateVector) -> Result<(BranchSet, ResourceLedger)> {
    let k = circuit.data_qubits.len();
    if input.dims() != vec![2; k] {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            got: input.order(),
        });
    }
    let q_total = circuit.owners.len();
    // Initial state: data register in the input, every ancilla in |0⟩.
    let dim = 1usize << q_total;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (in_idx, &amp) in input.amplitudes().iter().enumerate() {
        let mut idx = 0usize;
        for (bit_pos, &q) in circuit.data_qubits.iter().enumerate() {
            if (in_idx >> (k - 1 - bit_pos)) & 1 == 1 {
                idx |= 1 << (q_total - 1 - q);
            }
        }
        amps[idx] = amp;
    }
    let mut live: Vec<QubitId> = (0..q_total).collect();
    let mut branches = vec![Branch {
        amplitudes: amps,
        transcript: vec![None; circuit.cbits],
    }];
    let mut ledger = ResourceLedger::default();
    // Which parties know each classical bit.
    let mut knows: Vec<Vec<Party>> = vec![Vec::new(); circuit.cbits];
    let mut touched = vec![false; q_total];
    for q in &circuit.data_qubits {
        touched[*q] = true;
    }

    let pos_of = |live: &[QubitId], q: QubitId| -> Result<usize> {
        live.iter().position(|&x| x == q).ok_or(Error::BadIndex)
    };

    for instr in &circuit.instructions {
        match instr {
            Instruction::Unitary {
                party,
                qubits,
                matrix,
            }
            | Instruction::ControlledUnitary {
                party,
                qubits,
                matrix,
                ..
            } => {
                for &q in qubits {
                    if circuit.owners.get(q) != Some(party) {
                        return Err(Error::LocalityViolation);
                    }
                    touched[q] = true;
                }
                let control = match instr {
                    Instruction::ControlledUnitary { control, .. } => {
                        if !knows[*control].contains(party) {
                            return Err(Error::LocalityViolation);
                        }
                        Some(*control)
                    }
                    _ => None,
                };
                let positions: Vec<usize> = qubits
                    .iter()
                    .map(|&q| pos_of(&live, q))
                    .collect::<Result<_>>()?;
                for branch in branches.iter_mut() {
                    let fire = match control {
                        None => true,
                        Some(c) => branch.transcript[c] == Some(true),
                    };
                    if fire {
                        apply_gate(&mut branch.amplitudes, live.len(), &positions, matrix);
                    }
                }
            }
            Instruction::MeasureZ { qubit, cbit } => {
                touched[*qubit] = true;
                let pos = pos_of(&live, *qubit)?;
                let mask = 1usize << (live.len() - 1 - pos);
                let mut next = Vec::with_capacity(branches.len() * 2);
                for branch in branches.into_iter() {
                    for outcome in [false, true] {
                        let amps: Vec<Complex64> = branch
                            .amplitudes
                            .iter()
                            .enumerate()
                            .map(|(i, &a)| {
                                if ((i & mask) != 0) == outcome {
                                    a
                                } else {
                                    Complex64::new(0.0, 0.0)
                                }
                            })
                            .collect();
                        let mut transcript = branch.transcript.clone();
                        transcript[*cbit] = Some(outcome);
                        next.push(Branch {
                            amplitudes: amps,
                            transcript,
                        });
                    }
                }
                branches = next;
                knows[*cbit].push(circuit.owners[*qubit]);
            }
            Instruction::Send { from, to, cbit } => {
                if !knows[*cbit].contains(from) {
                    return Err(Error::LocalityViolation);
                }
                knows[*cbit].push(*to);
                *ledger.cbits.entry((*from, *to)).or_insert(0) += 1;
            }
            Instruction::ConsumeEbit { a, b } => {
                if circuit.owners[*a] == circuit.owners[*b] {
                    return Err(Error::LocalityViolation);
                }
                if touched[*a] || touched[*b] {
                    return Err(Error::BadInput("ebit qubits already in use"));
                }
                touched[*a] = true;
                touched[*b] = true;
                let pa = pos_of(&live, *a)?;
                let pb = pos_of(&live, *b)?;
                let mask_a = 1usize << (live.len() - 1 - pa);
                let mask_b = 1usize << (live.len() - 1 - pb);
                let s = core::f64::consts::FRAC_1_SQRT_2;
                for branch in branches.iter_mut() {
                    let dim = branch.amplitudes.len();
                    let mut out = vec![Complex64::new(0.0, 0.0); dim];
                    for (i, &amp) in branch.amplitudes.iter().enumerate() {
                        if amp.norm_sqr() == 0.0 {
                            continue;
                        }
                        debug_assert_eq!(i & mask_a, 0);
                        debug_assert_eq!(i & mask_b, 0);
                        out[i] += amp * s;
                        out[i | mask_a | mask_b] += amp * s;
                    }
                    branch.amplitudes = out;
                }
                ledger.ebits_consumed += 1;
            }
            Instruction::Discard { qubit } => {
                let pos = pos_of(&live, *qubit)?;
                let n_live = live.len();
                let mask = 1usize << (n_live - 1 - pos);
                for branch in branches.iter_mut() {
                    branch.amplitudes = contract_qubit(&branch.amplitudes, mask, *qubit)?;
                }
                live.remove(pos);
            }
        }
    }
    Ok((
        BranchSet {
            branches,
            live_qubits: live,
        },
        ledger,
    ))
}

/// Factors one qubit out of an unnormalized state; errors unless the
/// qubit is exactly in a product state with the rest.
fn contract_qubit(amps: &[Complex64], mask: usize, qubit: QubitId) -> Result<Vec<Complex64>> {
    let dim = amps.len();
    let half = dim / 2;
    let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let mut rows = [
        vec![Complex64::new(0.0, 0.0); half],
        vec![Complex64::new(0.0, 0.0); half],
    ];
    for (i, &a) in amps.iter().enumerate() {
        let bit = ((i & mask) != 0) as usize;
        // Collapse the masked bit out of the index.
        let low = i & (mask - 1);
        let high = (i >> 1) & !(mask - 1);
        rows[bit][high | low] = a;
    }
    if norm_sq < 1e-24 {
        return Ok(vec![Complex64::new(0.0, 0.0); half]);
    }
    // 2×2 Gram of the two rows; rank one within 1e-9 required.
    let g00: f64 = rows[0].iter().map(|z| z.norm_sqr()).sum();
    let g11: f64 = rows[1].iter().map(|z| z.norm_sqr()).sum();
    let g01: Complex64 = rows[0]
        .iter()
        .zip(rows[1].iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let tr = g00 + g11;
    let det = g00 * g11 - g01.norm_sqr();
    let lambda2 = (tr - (tr * tr - 4.0 * det).max(0.0).sqrt()) / 2.0;
    if lambda2 > 1e-18 * norm_sq {
        return Err(Error::DiscardNotProduct { qubit });
    }
    // Dominant qubit factor φ, phase-fixed on its largest component.
    let lambda1 = tr - lambda2;
    let phi = if (g00 - lambda1).abs() < (g11 - lambda1).abs() {
        [
            Complex64::new(1.0, 0.0) * g01,
            Complex64::new(lambda1 - g00, 0.0),
        ]
    } else {
        [Complex64::new(lambda1 - g11, 0.0), g01.conj()]
    };
    let norm_phi = (phi[0].norm_sqr() + phi[1].norm_sqr()).sqrt();
    let phi = if norm_phi < 1e-150 {
        if g00 >= g11 {
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        } else {
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
        }
    } else {
        [phi[0] / norm_phi, phi[1] / norm_phi]
    };
    let canonical = if phi[0].norm() >= phi[1].norm() {
        phi[0] / phi[0].norm()
    } else {
        phi[1] / phi[1].norm()
    };
    let phi = [phi[0] / canonical, phi[1] / canonical];
    let out: Vec<Complex64> = (0..half)
        .map(|j| phi[0].conj() * rows[0][j] + phi[1].conj() * rows[1][j])
        .collect();
    Ok(out)
}

const H: [f64; 4] = [
    core::f64::consts::FRAC_1_SQRT_2,
    core::f64::consts::FRAC_1_SQRT_2,
    core::f64::consts::FRAC_1_SQRT_2,
    -core::f64::consts::FRAC_1_SQRT_2,
];

pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &H)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn cnot_matrix() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
}

pub fn swap_matrix() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    )
}

/// Λ(U) on k controls and one target: U fires on the all-ones controls.
pub fn controlled_gate(controls: usize, u: &ComplexMatrix) -> ComplexMatrix {
    let dim = 1usize << (controls + 1);
    let mut m = ComplexMatrix::identity(dim);
    let base = dim - 2;
    for r in 0..2 {
        for c in 0..2 {
            m[(base + r, base + c)] = u[(r, c)];
        }
    }
    m
}

pub fn toffoli_matrix() -> ComplexMatrix {
    controlled_gate(2, &pauli_x())
}

/// A distributed protocol: circuit plus the joint unitary it realizes.
pub struct Protocol {
    pub name: String,
    pub circuit: Circuit,
    pub ideal: ComplexMatrix,
}

/// Non-local CNOT from one shared ebit and one classical bit each way.
pub fn protocol_nonlocal_cnot() -> Protocol {
    protocol_control_u_impl(pauli_x(), "cnot")
}

/// Same wiring with the target-side CNOT replaced by a control-U.
pub fn protocol_control_u(u: &ComplexMatrix) -> Result<Protocol> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: u.rows(),
        });
    }
    let dev = u.unitarity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    Ok(protocol_control_u_impl(u.clone(), "control-u"))
}

fn protocol_control_u_impl(u: ComplexMatrix, name: &str) -> Protocol {
    let mut c = Circuit::new(2);
    let a = c.data_qubit(0);
    let b = c.data_qubit(1);
    let a1 = c.ancilla(0);
    let b1 = c.ancilla(1);
    c.consume_ebit(a1, b1);
    c.unitary(0, &[a, a1], cnot_matrix());
    let m1 = c.measure(a1);
    c.send(0, 1, m1);
    c.controlled(1, &[b1], pauli_x(), m1);
    c.discard(a1);
    c.unitary(1, &[b1, b], controlled_gate(1, &u));
    c.unitary(1, &[b1], hadamard());
    let m2 = c.measure(b1);
    c.send(1, 0, m2);
    c.controlled(0, &[a], pauli_z(), m2);
    c.discard(b1);
    Protocol {
        name: String::from(name),
        circuit: c,
        ideal: controlled_gate(1, &u),
    }
}

/// State swap through double teleportation: two ebits, two bits each
/// way.
pub fn protocol_swap() -> Protocol {
    let mut c = Circuit::new(2);
    let a = c.data_qubit(0);
    let b = c.data_qubit(1);
    let e1a = c.ancilla(0);
    let e1b = c.ancilla(1);
    let e2a = c.ancilla(0);
    let e2b = c.ancilla(1);
    c.consume_ebit(e1a, e1b);
    c.consume_ebit(e2a, e2b);
    // Teleport a → Bob's e1b.
    c.unitary(0, &[a, e1a], cnot_matrix());
    c.unitary(0, &[a], hadamard());
    let za = c.measure(a);
    let xa = c.measure(e1a);
    c.send(0, 1, xa);
    c.send(0, 1, za);
    c.controlled(1, &[e1b], pauli_x(), xa);
    c.controlled(1, &[e1b], pauli_z(), za);
    c.discard(a);
    c.discard(e1a);
    // Teleport b → Alice's e2a.
    c.unitary(1, &[b, e2b], cnot_matrix());
    c.unitary(1, &[b], hadamard());
    let zb = c.measure(b);
    let xb = c.measure(e2b);
    c.send(1, 0, xb);
    c.send(1, 0, zb);
    c.controlled(0, &[e2a], pauli_x(), xb);
    c.controlled(0, &[e2a], pauli_z(), zb);
    c.discard(b);
    c.discard(e2b);
    c.set_output(vec![e2a, e1b]);
    Protocol {
        name: String::from("swap"),
        circuit: c,
        ideal: swap_matrix(),
    }
}

/// N-party control-U: N−1 ebits and 2(N−1) classical bits.
pub fn protocol_n_control_u(n: usize, u: &ComplexMatrix) -> Result<Protocol> {
    if n < 3 {
        return Err(Error::BadParameter("need at least three parties"));
    }
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: u.rows(),
        });
    }
    let dev = u.unitarity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let target_party = n - 1;
    let mut c = Circuit::new(n);
    let controls: Vec<QubitId> = (0..n - 1).map(|p| c.data_qubit(p)).collect();
    let target = c.data_qubit(target_party);
    // Step i: bond control i to the target party's ancilla Q_i.
    let mut q_anc = Vec::with_capacity(n - 1);
    for (i, &a_i) in controls.iter().enumerate() {
        let p_i = c.ancilla(i);
        let q_i = c.ancilla(target_party);
        c.consume_ebit(p_i, q_i);
        c.unitary(i, &[a_i, p_i], cnot_matrix());
        let m = c.measure(p_i);
        c.send(i, target_party, m);
        c.controlled(target_party, &[q_i], pauli_x(), m);
        c.discard(p_i);
        q_anc.push(q_i);
    }
    // Local (N−1)-control gate at the target party.
    let mut gate_qubits = q_anc.clone();
    gate_qubits.push(target);
    c.unitary(target_party, &gate_qubits, controlled_gate(n - 1, u));
    // Disentangle the ancillas back into the controls.
    for (i, &q_i) in q_anc.iter().enumerate() {
        c.unitary(target_party, &[q_i], hadamard());
        let m = c.measure(q_i);
        c.send(target_party, i, m);
        c.controlled(i, &[controls[i]], pauli_z(), m);
        c.discard(q_i);
    }
    Ok(Protocol {
        name: String::from("n-control-u"),
        circuit: c,
        ideal: controlled_gate(n - 1, u),
    })
}

/// Three-party Toffoli: two ebits and four classical bits.
pub fn protocol_toffoli() -> Protocol {
    let mut p = protocol_n_control_u(3, &pauli_x()).expect("X is unitary");
    p.name = String::from("toffoli");
    p
}

/// Outcome of the exact channel comparison.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub equal: bool,
    pub worst_fidelity: f64,
    /// Pauli-eigenbasis labels (0=|0⟩,1=|1⟩,2=|+⟩,3=|+i⟩) of a failing
    /// input, when unequal.
    pub witness: Option<Vec<u8>>,
}

fn pauli_eigen_input(labels: &[u8]) -> StateVector {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let single = |l: u8| -> [Complex64; 2] {
        match l {
            0 => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            1 => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            2 => [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            _ => [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
        }
    };
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for &l in labels {
        let q = single(l);
        let mut next = Vec::with_capacity(amps.len() * 2);
        for &a in &amps {
            next.push(a * q[0]);
            next.push(a * q[1]);
        }
        amps = next;
    }
    StateVector::new(amps, vec![2; labels.len()]).expect("unit product state")
}

/// Branch output reordered from live-qubit order to channel order.
fn branch_output(branch: &Branch, live: &[QubitId], outputs: &[QubitId]) -> Result<Vec<Complex64>> {
    let k = outputs.len();
    if live.len() != k {
        return Err(Error::BadInput("ancillas not all discarded"));
    }
    let mut perm = Vec::with_capacity(k);
    for &q in outputs {
        perm.push(live.iter().position(|&x| x == q).ok_or(Error::BadIndex)?);
    }
    let dim = 1usize << k;
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (idx, &amp) in branch.amplitudes.iter().enumerate() {
        let mut target = 0usize;
        for (out_bit, &src_pos) in perm.iter().enumerate() {
            if (idx >> (k - 1 - src_pos)) & 1 == 1 {
                target |= 1 << (k - 1 - out_bit);
            }
        }
        out[target] = amp;
    }
    Ok(out)
}

/// Proves or refutes that the circuit implements `ideal` as a channel.
///
/// Per measurement pattern the map input ↦ unnormalized output is a
/// Kraus operator K_b; reconstructing it column-by-column from the
/// computational-basis inputs and checking K_b ∝ ideal certifies the
/// channel on *every* input by linearity. The spanning
/// Pauli-eigenbasis product inputs are exercised as well (all 4^k for
/// k ≤ 3, a deterministic 64-sample subset beyond) and the worst
/// branch fidelity over them is reported.
pub fn channel_equivalence(circuit: &Circuit, ideal: &ComplexMatrix) -> Result<EquivalenceReport> {
    let k = circuit.data_qubits().len();
    let dim = 1usize << k;
    if ideal.rows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: ideal.rows(),
        });
    }
    // Column-by-column Kraus reconstruction.
    let mut kraus: Vec<ComplexMatrix> = Vec::new();
    for col in 0..dim {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[col] = Complex64::new(1.0, 0.0);
        let input = StateVector::new(amps, vec![2; k])?;
        let (set, _) = run(circuit, &input)?;
        if kraus.is_empty() {
            kraus = vec![ComplexMatrix::zeros(dim, dim); set.branches.len()];
        }
        for (b, branch) in set.branches.iter().enumerate() {
            let out = branch_output(branch, &set.live_qubits, circuit.output_qubits())?;
            for (r, &z) in out.iter().enumerate() {
                kraus[b][(r, col)] = z;
            }
        }
    }
    let mut equal = true;
    let mut total_weight = 0.0;
    for kb in &kraus {
        // γ_b from the Hilbert–Schmidt projection onto the ideal.
        let gamma = ideal.hs_inner(kb) / dim as f64;
        total_weight += gamma.norm_sqr();
        let dev = kb.sub(&ideal.scale(gamma)).max_abs_entry();
        if dev > 1e-10 {
            equal = false;
        }
    }
    if (total_weight - 1.0).abs() > 1e-9 {
        equal = false;
    }

    // Spanning product inputs; every branch output must match the
    // ideal image up to a phase.
    let inputs: Vec<Vec<u8>> = if k <= 3 {
        (0..4usize.pow(k as u32))
            .map(|mut x| {
                let mut labels = vec![0u8; k];
                for l in labels.iter_mut().rev() {
                    *l = (x % 4) as u8;
                    x /= 4;
                }
                labels
            })
            .collect()
    } else {
        let mut rng = SplitRng::new(0x9A7E);
        (0..64)
            .map(|_| (0..k).map(|_| (rng.next_u64() % 4) as u8).collect())
            .collect()
    };
    let mut worst = 1.0f64;
    let mut witness = None;
    for labels in &inputs {
        let input = pauli_eigen_input(labels);
        let (set, _) = run(circuit, &input)?;
        let expect = ideal.matvec(input.amplitudes());
        for branch in &set.branches {
            let p = branch.probability();
            if p < 1e-12 {
                continue;
            }
            let out = branch_output(branch, &set.live_qubits, circuit.output_qubits())?;
            let ip: Complex64 = expect
                .iter()
                .zip(out.iter())
                .map(|(e, o)| e.conj() * o)
                .sum();
            let fidelity = ip.norm_sqr() / p;
            if fidelity < worst {
                worst = fidelity;
                if fidelity < 1.0 - 1e-10 {
                    witness = Some(labels.clone());
                }
            }
        }
    }
    if worst < 1.0 - 1e-10 {
        equal = false;
    }
    Ok(EquivalenceReport {
        equal,
        worst_fidelity: worst,
        witness,
    })
}

/// Maximal entanglement (in ebits) a gate creates across each
/// party-vs-rest cut from product inputs, allowing local ancillas.
pub fn entangling_power_check(
    gate: &ComplexMatrix,
    owners: &[Party],
    samples: usize,
    rng: &mut SplitRng,
) -> Result<f64> {
    let k = owners.len();
    if gate.rows() != 1 << k {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            got: gate.rows(),
        });
    }
    let parties: usize = owners.iter().copied().max().unwrap_or(0) + 1;
    if parties < 2 {
        return Err(Error::BadParameter("need two data parties"));
    }
    // Workspace: data qubit i at position i, its same-party ancilla at
    // k + i.
    let n_all = 2 * k;
    let gate_positions: Vec<usize> = (0..k).collect();
    let mut best = 0.0f64;
    for cut_party in 0..parties {
        let side: Vec<usize> = (0..k)
            .filter(|&i| owners[i] == cut_party)
            .flat_map(|i| [i, k + i])
            .collect();
        if side.is_empty() || side.len() == n_all {
            continue;
        }
        let mut try_input = |amps: &mut Vec<Complex64>| -> Result<()> {
            apply_gate(amps, n_all, &gate_positions, gate);
            let state = StateVector::new(core::mem::take(amps), vec![2; n_all])?;
            let e = state.schmidt_spectrum(&side)?.shannon_entropy();
            if e > best {
                best = e;
            }
            Ok(())
        };
        // Structured seeds: plus states on the data register, and each
        // data qubit maximally entangled with its local ancilla.
        let mut seed1 = vec![Complex64::new(1.0, 0.0)];
        for q in 0..n_all {
            let factor: [Complex64; 2] = if q < k {
                let s = core::f64::consts::FRAC_1_SQRT_2;
                [Complex64::new(s, 0.0), Complex64::new(s, 0.0)]
            } else {
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
            };
            let mut next = Vec::with_capacity(seed1.len() * 2);
            for &a in &seed1 {
                next.push(a * factor[0]);
                next.push(a * factor[1]);
            }
            seed1 = next;
        }
        try_input(&mut seed1)?;
        // φ⁺ between each data qubit and its ancilla.
        let mut seed2 = vec![Complex64::new(0.0, 0.0); 1 << n_all];
        let s = core::f64::consts::FRAC_1_SQRT_2;
        for pattern in 0..(1usize << k) {
            let mut idx = 0usize;
            for i in 0..k {
                if (pattern >> (k - 1 - i)) & 1 == 1 {
                    idx |= 1 << (n_all - 1 - i);
                    idx |= 1 << (n_all - 1 - (k + i));
                }
            }
            seed2[idx] = Complex64::new(s.powi(k as i32), 0.0);
        }
        try_input(&mut seed2)?;
        // Random product-across-the-cut inputs.
        for _ in 0..samples {
            let mut amps = vec![Complex64::new(1.0, 0.0)];
            // Random pure state on the cut side tensored with one on
            // the complement, assembled qubit-position-major.
            let side_state = crate::states::random_pure(&vec![2; side.len()], rng);
            let other: Vec<usize> = (0..n_all).filter(|q| !side.contains(q)).collect();
            let other_state = crate::states::random_pure(&vec![2; other.len()], rng);
            amps = vec![Complex64::new(0.0, 0.0); 1 << n_all];
            for (si, &sa) in side_state.amplitudes().iter().enumerate() {
                for (oi, &oa) in other_state.amplitudes().iter().enumerate() {
                    let mut idx = 0usize;
                    for (bit, &q) in side.iter().enumerate() {
                        if (si >> (side.len() - 1 - bit)) & 1 == 1 {
                            idx |= 1 << (n_all - 1 - q);
                        }
                    }
                    for (bit, &q) in other.iter().enumerate() {
                        if (oi >> (other.len() - 1 - bit)) & 1 == 1 {
                            idx |= 1 << (n_all - 1 - q);
                        }
                    }
                    amps[idx] = sa * oa;
                }
            }
            try_input(&mut amps)?;
        }
    }
    Ok(best)
}
