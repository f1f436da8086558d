"""Prime tables: primality, Omega(n) with multiplicity, and roughness tests.

Tables cover the integers 0..limit+2 so a prime p <= limit always has its
shift p+2 classified too.  Primality comes from a segmented sieve of
Eratosthenes (segment size configurable, correctness independent of it);
Omega is accumulated by adding 1 along every prime-power progression,
which costs O(n log log n) numpy slice updates.

Binary cache layout (all integers little-endian):
    bytes 0-3   magic "DIOC"
    4-7         version, u32 (currently 1)
    8-15        limit, u64
    16-23       packed primality length in bytes, u64
    ...         primality bits, one per integer 0..limit+2, LSB-first
    next 8      omega length in bytes, u64
    ...         omega bytes, Omega(n) for n = 0..limit+2
    next 1      flag, u8: 1 if a smallest-prime-factor array follows
    [next 8]    spf length in entries, u64; then u32 entries
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParameterRangeError, ResourceBudgetError

MAGIC = b"DIOC"
VERSION = 1
DEFAULT_SEGMENT_BYTES = 2**18
#: Default cap on table entries; primality+omega cost 2 bytes per entry,
#: so the default budget tops out around half a GiB of table memory.
DEFAULT_MAX_ENTRIES = 2**28


@dataclass(frozen=True)
class PrimeTable:
    """Immutable primality/Omega tables over 0..limit+2."""

    limit: int
    is_prime: np.ndarray
    omega: np.ndarray
    spf: np.ndarray | None = None

    @property
    def top(self) -> int:
        """Largest integer the tables classify (= limit + 2)."""
        return self.limit + 2


def _simple_sieve(n: int) -> np.ndarray:
    """Primes up to n by a plain sieve; used for base primes and as a seed."""
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p:: p] = False
    return np.nonzero(mask)[0]


def build_tables(limit: int, *, segment_bytes: int = DEFAULT_SEGMENT_BYTES,
                 with_spf: bool = False,
                 max_entries: int = DEFAULT_MAX_ENTRIES) -> PrimeTable:
    """Sieve primality and Omega for all integers up to limit+2."""
    if not 100 <= limit <= 10**9:
        raise ParameterRangeError(f"limit must be in [100, 1e9], got {limit}")
    if segment_bytes < 8:
        raise ParameterRangeError("segment_bytes must be at least 8")
    top = limit + 2
    if top + 1 > max_entries:
        raise ResourceBudgetError(
            f"{top + 1} table entries exceed the budget of {max_entries}; "
            "raise max_entries explicitly to allow this size")

    is_prime = np.ones(top + 1, dtype=bool)
    is_prime[:2] = False
    base = _simple_sieve(math.isqrt(top))
    seg_len = segment_bytes  # one byte per entry in the bool array
    for lo in range(2, top + 1, seg_len):
        hi = min(lo + seg_len, top + 1)
        for p in base:
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                is_prime[start:hi:p] = False

    omega = np.zeros(top + 1, dtype=np.uint8)
    primes = np.nonzero(is_prime)[0]
    for p in primes:
        q = int(p)
        while q <= top:
            omega[q::q] += 1
            q *= int(p)

    spf = None
    if with_spf:
        spf = np.zeros(top + 1, dtype=np.uint32)
        # Descending order: the smallest prime writes last and wins.
        for p in primes[::-1]:
            spf[p::p] = p

    return PrimeTable(limit=int(limit), is_prime=is_prime, omega=omega, spf=spf)


def primes_in(table: PrimeTable, a: float, b: float) -> np.ndarray:
    """Primes in the half-open interval (a, b], ascending."""
    if b > table.limit:
        raise ParameterRangeError(f"upper end {b} exceeds table limit {table.limit}")
    lo = math.floor(a) + 1
    hi = math.floor(b)
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    lo = max(lo, 0)
    return np.nonzero(table.is_prime[lo:hi + 1])[0].astype(np.int64) + lo


def big_omega(table: PrimeTable, n: int) -> int:
    """Omega(n), the number of prime factors counted with multiplicity."""
    if not 1 <= n <= table.top:
        raise ParameterRangeError(f"n = {n} outside [1, {table.top}]")
    return int(table.omega[n])


def _odd_primes_below(table: PrimeTable, z: float) -> np.ndarray:
    """Odd primes p with 2 < p < z (strict), via the table."""
    if z - 1 > table.limit:
        raise ParameterRangeError(
            f"z = {z} needs primes beyond the table limit {table.limit}")
    if z <= 3:
        return np.empty(0, dtype=np.int64)
    # primes in (2, z): strict upper end, so step just below any integer z
    hi = math.ceil(z) - 1 if float(z).is_integer() else math.floor(z)
    return primes_in(table, 2, hi)


def is_z_rough(table: PrimeTable, n: int, z: float) -> bool:
    """True iff n has no prime factor q with 2 < q < z (the factor 2 is exempt)."""
    if not 1 <= n <= table.top:
        raise ParameterRangeError(f"n = {n} outside [1, {table.top}]")
    for p in _odd_primes_below(table, z):
        if n % int(p) == 0:
            return False
    return True


def z_rough_mask(table: PrimeTable, ns: np.ndarray, z: float) -> np.ndarray:
    """Vectorized is_z_rough over an integer array."""
    mask = np.ones(len(ns), dtype=bool)
    for p in _odd_primes_below(table, z):
        mask &= ns % int(p) != 0
    return mask


# ---------------------------------------------------------------------------
# binary cache

def cache_dir() -> Path:
    """Directory for cached tables; honors the DIOCHECK_CACHE variable."""
    env = os.environ.get("DIOCHECK_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "diocheck"


def default_cache_path(limit: int) -> Path:
    return cache_dir() / f"primes_{limit}.bin"


def save_tables(table: PrimeTable, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    bits = np.packbits(table.is_prime, bitorder="little")
    omega_bytes = table.omega.astype(np.uint8).tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQ", VERSION, table.limit))
        fh.write(struct.pack("<Q", bits.nbytes))
        fh.write(bits.tobytes())
        fh.write(struct.pack("<Q", len(omega_bytes)))
        fh.write(omega_bytes)
        if table.spf is None:
            fh.write(struct.pack("<B", 0))
        else:
            fh.write(struct.pack("<B", 1))
            fh.write(struct.pack("<Q", len(table.spf)))
            fh.write(table.spf.astype("<u4").tobytes())
    return path


def load_tables(path: str | Path) -> PrimeTable:
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        version, limit = struct.unpack("<IQ", fh.read(12))
        if version != VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        (nbits_bytes,) = struct.unpack("<Q", fh.read(8))
        bits = np.frombuffer(fh.read(nbits_bytes), dtype=np.uint8)
        n_entries = limit + 3
        is_prime = np.unpackbits(bits, bitorder="little")[:n_entries].astype(bool)
        (n_omega,) = struct.unpack("<Q", fh.read(8))
        omega = np.frombuffer(fh.read(n_omega), dtype=np.uint8).copy()
        (has_spf,) = struct.unpack("<B", fh.read(1))
        spf = None
        if has_spf:
            (n_spf,) = struct.unpack("<Q", fh.read(8))
            spf = np.frombuffer(fh.read(n_spf * 4), dtype="<u4").astype(np.uint32)
    return PrimeTable(limit=int(limit), is_prime=is_prime, omega=omega, spf=spf)
