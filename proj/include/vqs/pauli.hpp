#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vqs {

/// Single-qubit Pauli letter. The numeric values are load-bearing: letters
/// pack into 2-bit fields of PauliString::code().
enum class Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char letter_char(Letter l);
Letter letter_from_char(char c);

/// Tensor product of Pauli letters on a fixed-size qubit register.
///
/// Qubits are numbered 1..n with qubit 1 the leftmost letter of the text
/// form (the ancilla slot once a string has been extended). Internally the
/// letters live in 2-bit fields of a 64-bit code, qubit j at bits 2(j-1),
/// which caps the register at 32 qubits.
class PauliString {
 public:
  static constexpr int kMaxQubits = 32;

  PauliString() = default;

  /// Identity word on n qubits.
  explicit PauliString(int n_qubits);

  /// Parses a word of letters from {I, X, Y, Z}, e.g. "XXIZ".
  static PauliString parse(std::string_view text);

  std::string str() const;

  int n_qubits() const { return n_; }

  /// Letter at 1-based qubit position.
  Letter letter(int qubit) const;
  void set_letter(int qubit, Letter l);

  /// Number of non-identity letters.
  int locality() const;

  bool is_identity() const;

  /// Packed 2-bit-per-qubit representation, qubit 1 in the low bits.
  std::uint64_t code() const { return code_; }

  /// One bit per qubit (bit j-1 for qubit j), set where the letter is not I.
  std::uint64_t support_mask() const;

  /// Two bits per qubit, both set where the letter is not I.
  std::uint64_t support_mask2() const;

  bool operator==(const PauliString& other) const = default;

 private:
  std::uint64_t code_ = 0;
  int n_ = 0;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept;
};

/// Pauli word together with an exactly tracked phase from {1, i, -1, -i}.
struct PhasedPauli {
  PauliString word;
  /// Phase exponent q meaning i^q, q in 0..3.
  int phase_quarter = 0;

  std::complex<double> phase() const;
};

/// Letterwise product a*b with the phase tracked exactly.
PhasedPauli multiply(const PauliString& a, const PauliString& b);

/// Prepends an X letter as a new qubit 1, shifting existing qubits up.
PauliString extend_with_x(const PauliString& p);

/// True when at every position the letters are equal or at least one is I.
bool qubitwise_commute(const PauliString& a, const PauliString& b);

/// Trace of the product of the given words on n qubits: 2^n times the
/// (necessarily real) accumulated phase when the product is the identity
/// word, and 0 otherwise.
double trace_product(std::span<const PauliString> words, int n_qubits);

/// Real-weighted sum of Pauli words on a common register.
///
/// Terms keep first-insertion order; adding an existing word merges the
/// coefficients and a term whose coefficient becomes exactly zero is
/// removed. The text form is one term per line, "<coefficient> <letters>",
/// with '#' starting a comment; coefficients are printed with enough digits
/// that parse(format(x)) == x bit for bit.
class ObservableSum {
 public:
  struct Term {
    double coeff;
    PauliString word;

    bool operator==(const Term& other) const = default;
  };

  ObservableSum() = default;
  explicit ObservableSum(int n_qubits);

  static ObservableSum parse(std::string_view text);
  static ObservableSum load(const std::filesystem::path& file);

  std::string format() const;
  void save(const std::filesystem::path& file) const;

  /// Merges a term in; coeff must be finite and word length must match the
  /// register (any word fixes the register of an empty sum).
  void add(double coeff, const PauliString& word);

  int n_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  double max_abs_coeff() const;

  /// Same weights on words extended with an ancilla X.
  ObservableSum extended_with_x() const;

  bool operator==(const ObservableSum& other) const = default;

 private:
  int index_of(const PauliString& word) const;

  int n_ = 0;
  std::vector<Term> terms_;
};

}  // namespace vqs
