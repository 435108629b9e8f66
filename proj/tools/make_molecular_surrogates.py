#!/usr/bin/env python3
"""Generate surrogate molecular Hamiltonian files in the plain-text format.

Electronic-structure decompositions are not computed here (no chemistry
stack is vendored); instead these files carry the same shape as typical
Bravyi-Kitaev qubit Hamiltonians of small molecules: a dominant block of
{I,Z} diagonal words with large coefficients, plus many small off-diagonal
words with an even number of Y letters (real-matrix Hamiltonian), with
coefficient weight falling off with support size.

The H2-style file is tuned so that the squared-coefficient sum and the
squared-coefficient-weighted mean of 3^(locality+1) land near the values
implied by published measurement-cost figures for H2/6-31g (184 terms,
8 qubits); the LiH-style file (630 terms, 12 qubits) is shaped the same
way without numeric targets.
"""

import random
import sys
from pathlib import Path

LETTERS = "IXYZ"


def word_from_letters(letters):
    return "".join(letters)


def random_diagonal_word(rng, n, weight):
    qubits = rng.sample(range(n), weight)
    letters = ["I"] * n
    for q in qubits:
        letters[q] = "Z"
    return word_from_letters(letters)


def random_offdiagonal_word(rng, n, support, z_extra):
    qubits = rng.sample(range(n), min(n, support + z_extra))
    letters = ["I"] * n
    xy = qubits[:support]
    n_y = rng.choice([c for c in range(0, support + 1, 2)])
    y_qubits = set(rng.sample(xy, n_y))
    for q in xy:
        letters[q] = "Y" if q in y_qubits else "X"
    for q in qubits[support:]:
        letters[q] = "Z"
    return word_from_letters(letters)


def locality(word):
    return sum(1 for c in word if c != "I")


def build_terms(rng, n, n_terms, diag_fraction, scale_small):
    words = {}

    def add(word, coeff):
        if word not in words and locality(word) > 0:
            words[word] = coeff
            return True
        return False

    # Diagonal backbone: all single-Z, all double-Z, then random higher
    # {I,Z} words until the diagonal block is full.
    n_diag = int(round(diag_fraction * n_terms))
    for q in range(n):
        letters = ["I"] * n
        letters[q] = "Z"
        add(word_from_letters(letters), rng.gauss(0.25, 0.12))
    for a in range(n):
        for b in range(a + 1, n):
            if len(words) >= n_diag:
                break
            letters = ["I"] * n
            letters[a] = "Z"
            letters[b] = "Z"
            add(word_from_letters(letters), rng.gauss(0.11, 0.05))
    while len(words) < n_diag:
        weight = rng.choice([3, 3, 4, 4, 5])
        coeff = rng.gauss(0.0, 0.02)
        add(random_diagonal_word(rng, n, min(weight, n)), coeff)

    # Off-diagonal block: mostly 2- and 4-site X/Y supports with short Z
    # tails, magnitudes one to three orders below the diagonal block.
    while len(words) < n_terms:
        support = rng.choices([2, 3, 4, 5, 6], weights=[25, 10, 45, 10, 10])[0]
        z_extra = rng.choices([0, 1, 2], weights=[50, 30, 20])[0]
        word = random_offdiagonal_word(rng, n, min(support, n), z_extra)
        magnitude = scale_small * abs(rng.lognormvariate(0.0, 1.1))
        magnitude /= 1.6 ** max(0, locality(word) - 2)
        add(word, magnitude * rng.choice([-1.0, 1.0]))

    return words


def weighted_power_mean(words):
    total = sum(c * c for c in words.values())
    acc = sum(c * c * 3.0 ** (locality(w) + 1) for w, c in words.items())
    return acc / total


def rescale_high_locality(words, target, lo=0.05, hi=20.0):
    """Bisect a multiplier on terms with locality >= 4 so the squared-weighted
    mean of 3^(locality+1) lands near target."""
    base = dict(words)

    def apply(mult):
        return {
            w: (c * mult if locality(w) >= 4 else c) for w, c in base.items()
        }

    for _ in range(60):
        mid = (lo + hi) / 2.0
        if weighted_power_mean(apply(mid)) < target:
            lo = mid
        else:
            hi = mid
    return apply((lo + hi) / 2.0)


def normalize_total(words, target_sq_sum):
    total = sum(c * c for c in words.values())
    factor = (target_sq_sum / total) ** 0.5
    return {w: c * factor for w, c in words.items()}


def write_file(path, words, header_lines):
    lines = [f"# {line}" for line in header_lines]
    for word in sorted(words, key=lambda w: (locality(w), w)):
        lines.append(f"{words[word]!r} {word}")
    path.write_text("\n".join(lines) + "\n")


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data")
    out_dir.mkdir(parents=True, exist_ok=True)

    rng = random.Random(7)
    h2 = build_terms(rng, n=8, n_terms=184, diag_fraction=0.4,
                     scale_small=0.02)
    h2 = rescale_high_locality(h2, target=130.0)
    h2 = normalize_total(h2, target_sq_sum=3.70)
    write_file(
        out_dir / "h2_631g_bk.txt", h2,
        [
            "Surrogate molecular Hamiltonian: 8 qubits, 184 Pauli terms,",
            "diagonal-dominant coefficient spectrum shaped like an H2/6-31g",
            "Bravyi-Kitaev decomposition. Generated by",
            "tools/make_molecular_surrogates.py (seed 7); not produced by an",
            "electronic-structure package, so absolute energies and",
            "measurement costs are representative rather than chemical.",
        ])

    lih = build_terms(rng, n=12, n_terms=630, diag_fraction=0.35,
                      scale_small=0.012)
    lih = rescale_high_locality(lih, target=200.0)
    lih = normalize_total(lih, target_sq_sum=2.0)
    write_file(
        out_dir / "lih_sto3g_bk.txt", lih,
        [
            "Surrogate molecular Hamiltonian: 12 qubits, 630 Pauli terms,",
            "diagonal-dominant coefficient spectrum shaped like a LiH/STO-3G",
            "Bravyi-Kitaev decomposition. Generated by",
            "tools/make_molecular_surrogates.py (seed 7); not produced by an",
            "electronic-structure package, so absolute energies and",
            "measurement costs are representative rather than chemical.",
        ])

    for name, words in [("h2", h2), ("lih", lih)]:
        sq = sum(c * c for c in words.values())
        print(f"{name}: terms={len(words)} sum_sq={sq:.4f} "
              f"mean3pow={weighted_power_mean(words):.1f}")


if __name__ == "__main__":
    main()
