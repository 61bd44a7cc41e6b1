"""Quality, sparsity and complexity measurements, with CSV exports.

All tabular outputs are comma-separated text with a one-line header
(spectrogram matrices carry a single ``#`` comment line describing the
layout). Plotting is left to external tools.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_1d_float
from .codec import EncodedStream, reconstruct_block

__all__ = [
    "MetricsReport",
    "classic_spectrogram",
    "gain",
    "kappa_stats",
    "report_from_stream",
    "snr",
    "sparse_spectrogram_export",
    "sparsity_ratio",
    "write_block_profile_csv",
    "write_metrics_csv",
]

#: power floor added before taking logs so zero cells survive the dB scale
POWER_FLOOR = 1e-13


def snr(reference, estimate) -> float:
    """Signal-to-noise ratio 10*log10(||f||^2 / ||f - f_hat||^2) in dB.

    A vanishing error norm (below 1e-300) returns ``math.inf``.
    """
    f = as_1d_float(reference, "reference")
    g = as_1d_float(estimate, "estimate", length=f.size)
    signal_energy = float(f @ f)
    if signal_energy == 0.0:
        raise ValueError("reference signal is zero; SNR is undefined")
    error = f - g
    error_norm = float(np.linalg.norm(error))
    if error_norm < 1e-300:
        return math.inf
    return 10.0 * math.log10(signal_energy / (error_norm * error_norm))


def sparsity_ratio(total_len: int, coefficient_count: int) -> float:
    """N / K: samples represented per retained coefficient."""
    if coefficient_count < 1:
        raise ValueError("coefficient_count must be at least 1")
    return total_len / coefficient_count


def gain(sr_spmp: float, sr_mp: float) -> float:
    """Relative sparsity improvement of SPMP over MP, in percent."""
    if sr_mp <= 0:
        raise ValueError("sr_mp must be positive")
    return (sr_spmp - sr_mp) / sr_mp * 100.0


def kappa_stats(iteration_logs):
    """Double average of projection iteration counts.

    ``iteration_logs`` holds one list of per-selection iteration counts per
    block. Returns ``(kappa_bar_bar, kappa_bar_per_block)`` where the
    per-block mean of an empty log is 0 by convention (no projections ran).
    """
    logs = list(iteration_logs)
    if not logs:
        raise ValueError("iteration_logs must be nonempty")
    per_block = [float(np.mean(log)) if len(log) else 0.0 for log in logs]
    return float(np.mean(per_block)), per_block


@dataclass
class MetricsReport:
    """Summary and per-block measurements for one encoded stream."""

    snr_db: float
    sr: float
    sr_local: list[float]
    kappa_bar_bar: float
    kappa_bar_per_block: list[float]
    block_coefficients: list[int]
    block_residual_norms: list[float]
    total_len: int
    block_len: int
    gain_percent: float | None = None
    per_block: list[tuple] = field(default_factory=list)

    def __post_init__(self):
        if not self.per_block:
            self.per_block = [
                (
                    q + 1,
                    self.block_coefficients[q],
                    self.kappa_bar_per_block[q],
                    self.block_residual_norms[q],
                )
                for q in range(len(self.block_coefficients))
            ]


def report_from_stream(stream: EncodedStream, original, iteration_logs=None) -> MetricsReport:
    """Measure a stream against the original signal it encoded.

    ``iteration_logs`` (from encode time) feeds the kappa statistics; we
    report NaN when they are unavailable, since the wire format does not
    carry iteration counts.
    """
    header = stream.header
    f = as_1d_float(original, "original", length=header.signal_len)
    counts = [len(record) for record in stream.records]
    total = sum(counts)

    reconstructed = np.empty(header.num_blocks * header.block_len)
    residual_norms = []
    padded = np.zeros_like(reconstructed)
    padded[: f.size] = f
    for q, record in enumerate(stream.records):
        block = reconstruct_block(record, header)
        reconstructed[q * header.block_len : (q + 1) * header.block_len] = block
        residual_norms.append(
            float(np.linalg.norm(padded[q * header.block_len : (q + 1) * header.block_len] - block))
        )
    sr_local = [
        header.block_len / k if k else math.inf for k in counts
    ]
    if iteration_logs is not None and len(iteration_logs):
        kappa_bar_bar, kappa_per_block = kappa_stats(iteration_logs)
    else:
        kappa_bar_bar = math.nan
        kappa_per_block = [math.nan] * header.num_blocks
    return MetricsReport(
        snr_db=snr(f, reconstructed[: f.size]) if np.any(f) else math.inf,
        sr=sparsity_ratio(f.size, total) if total else math.inf,
        sr_local=sr_local,
        kappa_bar_bar=kappa_bar_bar,
        kappa_bar_per_block=kappa_per_block,
        block_coefficients=counts,
        block_residual_norms=residual_norms,
        total_len=f.size,
        block_len=header.block_len,
    )


def write_metrics_csv(report: MetricsReport, path) -> None:
    """Summary metrics as ``metric,value`` rows."""
    rows = [
        ("snr_db", report.snr_db),
        ("sparsity_ratio", report.sr),
        ("total_coefficients", sum(report.block_coefficients)),
        ("signal_len", report.total_len),
        ("block_len", report.block_len),
        ("num_blocks", len(report.block_coefficients)),
        ("kappa_bar_bar", report.kappa_bar_bar),
    ]
    if report.gain_percent is not None:
        rows.append(("gain_percent", report.gain_percent))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("metric,value\n")
        for name, value in rows:
            handle.write(f"{name},{value}\n")


def write_block_profile_csv(report: MetricsReport, path) -> None:
    """Per-block rows: local sparsity profile plus projection statistics.

    ``center_sample`` positions each block at its center (0-based sample
    index); ``inv_sr_q`` is the inverse local sparsity k_q / N_b, and blocks
    with no coefficients report ``sr_q`` as ``inf``.
    """
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(
            "block,center_sample,k_q,sr_q,inv_sr_q,kappa_bar_q,residual_norm\n"
        )
        for q, k in enumerate(report.block_coefficients):
            center = q * report.block_len + (report.block_len - 1) / 2.0
            handle.write(
                f"{q + 1},{center},{k},{report.sr_local[q]},"
                f"{k / report.block_len},{report.kappa_bar_per_block[q]},"
                f"{report.block_residual_norms[q]}\n"
            )


def sparse_spectrogram_export(stream: EncodedStream, triplet_path, matrix_path=None):
    """Export the per-block sparse spectral powers.

    Writes one ``block,atom_index,power`` row per kept coefficient, and
    optionally a dense dB matrix (rows = blocks, columns = atom indices)
    with the power floor added before the log and the scale normalized so
    the maximum is 0 dB. Returns the dense power matrix.
    """
    header = stream.header
    power = np.zeros((header.num_blocks, header.num_atoms))
    with open(triplet_path, "w", encoding="utf-8") as handle:
        handle.write("block,atom_index,power\n")
        for q, record in enumerate(stream.records):
            for index, coeff in zip(record.indices, record.coefficients):
                cell = abs(complex(coeff)) ** 2
                power[q, int(index) - 1] = cell
                handle.write(f"{q + 1},{int(index)},{cell}\n")
    if matrix_path is not None:
        top = power.max() if power.size and power.max() > 0 else 1.0
        db = 10.0 * np.log10(power / top + POWER_FLOOR)
        np.savetxt(
            matrix_path,
            db,
            delimiter=",",
            header="rows=block q (1..Q), cols=atom index (1..M), values=dB re max",
        )
    return power


def hamming_window(length: int) -> np.ndarray:
    """Symmetric Hamming weights 0.54 - 0.46 cos(2 pi j / (L - 1))."""
    if length < 2:
        raise ValueError("window length must be at least 2")
    j = np.arange(length)
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * j / (length - 1))


def classic_spectrogram(signal, window_len: int = 4096, overlap: float = 0.5,
                        path=None) -> np.ndarray:
    """Hamming-window STFT power in dB, max-normalized.

    Frames advance by ``window_len * (1 - overlap)`` samples; the frame
    count is floor((N - L) / hop) + 1. Rows of the returned (and written)
    matrix are frames, columns are the one-sided frequency bins.
    """
    x = as_1d_float(signal, "signal")
    if window_len > x.size:
        raise ValueError("window_len exceeds the signal length")
    hop = max(1, int(round(window_len * (1.0 - overlap))))
    frames = (x.size - window_len) // hop + 1
    window = hamming_window(window_len)
    power = np.empty((frames, window_len // 2 + 1))
    for t in range(frames):
        segment = x[t * hop : t * hop + window_len] * window
        power[t] = np.abs(np.fft.rfft(segment)) ** 2
    top = power.max() if power.max() > 0 else 1.0
    db = 10.0 * np.log10(power / top + POWER_FLOOR)
    if path is not None:
        np.savetxt(
            path,
            db,
            delimiter=",",
            header=f"rows=frame (hop={hop}), cols=rfft bin (0..{window_len // 2}), values=dB re max",
        )
    return db
