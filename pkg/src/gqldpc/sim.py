"""Monte-Carlo FER/BER sweeps over BPSK/AWGN with SPA decoding."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate, optimize

from .codec import SpaDecoder, awgn_llr
from .codegen import PrepMatrix, encode_native
from .qc import QcBlockMatrix, expand

WILSON_Z = 1.959963984540054
CSV_HEADER = ("ebn0_db", "frames", "bit_errors", "frame_errors", "ber", "fer",
              "avg_iters", "wall_s", "fer_lo", "fer_hi", "shannon_db")
CHUNK_FRAMES = 2048


@dataclass
class CodeRef:
    """What a sweep needs to know about a code."""

    hrep: QcBlockMatrix
    prep: PrepMatrix
    name: str = ""

    @property
    def n(self) -> int:
        return self.prep.n

    @property
    def k(self) -> int:
        return self.prep.k

    @property
    def rate(self) -> float:
        return self.prep.k / self.prep.n


@dataclass
class SweepConfig:
    code: CodeRef
    ebn0_db: tuple[float, ...]
    max_iters: int = 25
    target_frame_errors: int = 100
    max_frames: int = 10_000_000
    seed: int = 0
    workers: int = 1
    chunk_frames: int = CHUNK_FRAMES
    all_zero: bool = False

    def __post_init__(self):
        self.ebn0_db = tuple(float(x) for x in self.ebn0_db)
        if not self.ebn0_db:
            raise ValueError("empty Eb/N0 grid")
        if any(b <= a for a, b in zip(self.ebn0_db, self.ebn0_db[1:])):
            raise ValueError("Eb/N0 grid must be strictly increasing")
        if self.target_frame_errors < 1:
            raise ValueError("target_frame_errors must be at least 1")
        if self.max_frames < 1 or self.max_iters < 1 or self.workers < 1 or self.chunk_frames < 1:
            raise ValueError("max_frames, max_iters, workers and chunk_frames must be positive")


@dataclass
class SimRecord:
    ebn0_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    avg_iterations: float
    wall_seconds: float
    fer_ci: tuple[float, float] = field(default=(0.0, 1.0))


def wilson_interval(errors: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    if trials <= 0:
        return 0.0, 1.0
    p = errors / trials
    den = 1.0 + z * z / trials
    mid = (p + z * z / (2 * trials)) / den
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / den
    # the bounds are exact at the ends of the range
    lo = 0.0 if errors == 0 else max(0.0, mid - half)
    hi = 1.0 if errors == trials else min(1.0, mid + half)
    return lo, hi


# -- BI-AWGN capacity ----------------------------------------------------------

def biawgn_capacity(ebn0_db: float, rate: float) -> float:
    """Capacity in bits per use at the noise level implied by (Eb/N0, rate).

    With the LLR L ~ N(mu, 2 mu), mu = 2/sigma^2: C = 1 - E[log2(1 + e^-L)].
    """
    sigma2 = 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))
    mu = 2.0 / sigma2
    sd = math.sqrt(2.0 * mu)

    def f(z):
        ell = mu + sd * z
        return math.exp(-0.5 * z * z) * np.logaddexp(0.0, -ell) / math.log(2.0)

    val, _ = integrate.quad(f, -40.0, 40.0, limit=200)
    return 1.0 - val / math.sqrt(2.0 * math.pi)


def shannon_reference(rate: float) -> float:
    """Smallest Eb/N0 (dB) at which BI-AWGN capacity reaches ``rate``."""
    if not 0.0 < rate < 1.0:
        raise ValueError("rate must lie in (0, 1)")
    return optimize.bisect(lambda x: biawgn_capacity(x, rate) - rate, -2.0, 30.0, xtol=1e-7)


# -- sweep ---------------------------------------------------------------------

_WORKER: dict = {}


def _setup(code: CodeRef):
    _WORKER["prep"] = code.prep
    _WORKER["decoder"] = SpaDecoder(expand(code.hrep))


def chunk_seed(seed: int, snr_index: int, chunk: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), int(snr_index), int(chunk)])


def _run_chunk(args):
    """Decode one chunk; returns per-frame (bit errors, frame error, iterations)."""
    seed, snr_index, chunk, frames, ebn0, rate, max_iters, all_zero = args
    prep: PrepMatrix = _WORKER["prep"]
    dec: SpaDecoder = _WORKER["decoder"]
    rng = np.random.default_rng(chunk_seed(seed, snr_index, chunk))
    if all_zero:
        cw = np.zeros((frames, prep.n), dtype=np.uint8)
    else:
        msg = rng.integers(0, 2, size=(frames, prep.k), dtype=np.uint8)
        cw = encode_native(prep, msg)
    llr = awgn_llr(cw, ebn0, rate, rng)
    bits, _, iters = dec.decode_batch(llr, max_iters)
    bit_err = (bits != cw).sum(axis=1)
    return bit_err, bit_err > 0, iters


def _chunks(cfg: SweepConfig):
    done, c = 0, 0
    while done < cfg.max_frames:
        size = min(cfg.chunk_frames, cfg.max_frames - done)
        yield c, size
        done += size
        c += 1


def _sweep_point(cfg: SweepConfig, idx: int, pool) -> SimRecord:
    ebn0 = cfg.ebn0_db[idx]
    t0 = time.perf_counter()
    frames = bit_errors = frame_errors = iters = 0
    jobs = ((cfg.seed, idx, c, size, ebn0, cfg.code.rate, cfg.max_iters, cfg.all_zero)
            for c, size in _chunks(cfg))
    batch = max(1, cfg.workers)
    finished = False
    while not finished:
        todo = [j for _, j in zip(range(batch), jobs)]
        if not todo:
            break
        results = pool.map(_run_chunk, todo) if pool is not None else map(_run_chunk, todo)
        for be, fe, it in results:
            need = cfg.target_frame_errors - frame_errors
            hits = np.flatnonzero(fe)
            if hits.size >= need:
                # keep frames up to and including the one that meets the target
                cut = int(hits[need - 1]) + 1
                be, fe, it = be[:cut], fe[:cut], it[:cut]
                finished = True
            frames += be.size
            bit_errors += int(be.sum())
            frame_errors += int(fe.sum())
            iters += int(it.sum())
            if finished:
                break
    wall = time.perf_counter() - t0
    n = cfg.code.n
    return SimRecord(ebn0, frames, bit_errors, frame_errors,
                     bit_errors / (frames * n), frame_errors / frames, iters / frames, wall,
                     wilson_interval(frame_errors, frames))


def run_sweep(cfg: SweepConfig, progress=None) -> list[SimRecord]:
    """Sweep the grid; each point stops at the error target or ``max_frames``.

    Chunk c of grid point i draws its messages and noise from the stream
    SeedSequence([seed, i, c]) and chunks are tallied in order, so the
    result does not depend on ``workers``.
    """
    records = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers, initializer=_setup, initargs=(cfg.code,)) as pool:
            for i in range(len(cfg.ebn0_db)):
                records.append(_sweep_point(cfg, i, pool))
                if progress:
                    progress(records[-1])
    else:
        _setup(cfg.code)
        for i in range(len(cfg.ebn0_db)):
            records.append(_sweep_point(cfg, i, None))
            if progress:
                progress(records[-1])
    return records


def _fmt(x: float) -> str:
    return format(float(x), ".10g")


def records_csv(records: list[SimRecord], rate: float, timing: bool = False) -> str:
    """CSV text. Wall time is written as 0 unless ``timing`` so that reruns
    produce identical bytes."""
    shannon = shannon_reference(rate)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        lo, hi = r.fer_ci
        w.writerow([_fmt(r.ebn0_db), r.frames, r.bit_errors, r.frame_errors, _fmt(r.ber),
                    _fmt(r.fer), _fmt(r.avg_iterations),
                    _fmt(round(r.wall_seconds, 3) if timing else 0.0),
                    _fmt(lo), _fmt(hi), _fmt(round(shannon, 4))])
    return buf.getvalue()


def write_csv(path, records: list[SimRecord], rate: float, timing: bool = False) -> Path:
    path = Path(path)
    path.write_text(records_csv(records, rate, timing), encoding="utf-8")
    return path


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
