"""Graphs sampled from a kernel model: deterministic weights, seeded Bernoulli draws,
combinatorial Laplacians, and the step-function interpolant of a finite graph."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ringsh.graphon import GraphonModel, evaluate, is_ring, NotARingGraphonError


@dataclass(frozen=True)
class GraphRealization:
    """A finite graph drawn from a kernel model on the grid x_j = j/N, j = 1..N."""

    N: int
    adjacency: np.ndarray
    laplacian: np.ndarray
    deterministic: bool
    seed: int | None = None

    @property
    def grid(self) -> np.ndarray:
        return np.arange(1, self.N + 1) / self.N

    @property
    def provenance(self) -> str:
        return "deterministic" if self.deterministic else f"random(seed={self.seed})"


def laplacian(adjacency: np.ndarray) -> np.ndarray:
    """Combinatorial Laplacian A - diag(row sums).

    Rejects asymmetric or nonzero-diagonal input.  Binary adjacency matrices
    get integer degree accumulation so row sums of the result are exactly zero.
    """
    A = np.asarray(adjacency)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("adjacency must be square")
    if not np.array_equal(A, A.T):
        raise ValueError("adjacency must be symmetric")
    if np.any(np.diagonal(A) != 0):
        raise ValueError("adjacency must have zero diagonal")
    if np.issubdtype(A.dtype, np.integer) or np.all((A == 0) | (A == 1)):
        deg = A.astype(np.int64).sum(axis=1).astype(float)
    else:
        deg = A.sum(axis=1)
    L = A.astype(float) - np.diag(deg)
    return L


def _kernel_matrix(model: GraphonModel, N: int) -> np.ndarray:
    x = np.arange(1, N + 1) / N
    return evaluate(model, x[:, None], x[None, :])


def deterministic_graph(model: GraphonModel, N: int) -> GraphRealization:
    """Weighted graph with A[i,j] = W(i/N, j/N) off the diagonal."""
    if N < 2:
        raise ValueError("N must be at least 2")
    A = np.asarray(_kernel_matrix(model, N), dtype=float)
    np.fill_diagonal(A, 0.0)
    A = 0.5 * (A + A.T)  # guard against asymmetric float noise
    return GraphRealization(N=N, adjacency=A, laplacian=laplacian(A), deterministic=True)


def random_graph(model: GraphonModel, N: int, seed: int) -> GraphRealization:
    """Bernoulli graph: edge (i,j) present with probability W(i/N, j/N).

    Uses the counter-based Philox generator keyed by the seed; entry (i,j)
    always consumes the same counter slot, so the output is bit-identical for
    identical (model, N, seed) regardless of evaluation order.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    P = np.asarray(_kernel_matrix(model, N), dtype=float)
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    U = rng.random((N, N))
    upper = np.triu(np.ones((N, N), dtype=bool), k=1)
    A = np.zeros((N, N))
    A[upper] = (U[upper] < P[upper]).astype(float)
    A = A + A.T
    return GraphRealization(N=N, adjacency=A, laplacian=laplacian(A), deterministic=False, seed=int(seed))


@dataclass(frozen=True)
class StepGraphon:
    """Piecewise-constant kernel with value R(|i-j|/N) on block I_i x I_j."""

    N: int
    values: np.ndarray  # (N, N) block value table

    def refined_laplacian(self, refine: int = 8) -> np.ndarray:
        """Discretize the step kernel's Laplacian on a grid of M = refine*N points.

        Midpoint quadrature is exact because the kernel is constant on blocks;
        the nonzero spectrum of the result is the finite graph's spectrum
        scaled by 1/N.
        """
        M = refine * self.N
        K = np.kron(self.values, np.ones((refine, refine)))
        deg = K.sum(axis=1) / M
        return K / M - np.diag(deg)


def step_graphon(model: GraphonModel, N: int) -> StepGraphon:
    """Step-function interpolant of the deterministic graph on N blocks."""
    if not is_ring(model):
        raise NotARingGraphonError("step graphons are defined for ring models only")
    if N < 2:
        raise ValueError("N must be at least 2")
    i = np.arange(N)
    # Block value depends only on |i - j|/N; evaluate the kernel at offset d.
    offsets = np.abs(i[:, None] - i[None, :]) / N
    values = evaluate(model, offsets, np.zeros_like(offsets))
    return StepGraphon(N=N, values=np.asarray(values, dtype=float))


def export_edge_list(graph: GraphRealization, csv_path, json_path) -> None:
    """Write the realization as a CSV edge list plus a JSON header."""
    import json

    with open(csv_path, "w") as fh:
        fh.write("i,j,weight\n")
        N = graph.N
        A = graph.adjacency
        for i in range(N):
            for j in range(i + 1, N):
                if A[i, j] != 0.0:
                    fh.write(f"{i + 1},{j + 1},{A[i, j]:.17g}\n")
    header = {"N": graph.N, "provenance": graph.provenance, "seed": graph.seed}
    with open(json_path, "w") as fh:
        json.dump(header, fh, indent=2, sort_keys=True)
        fh.write("\n")
