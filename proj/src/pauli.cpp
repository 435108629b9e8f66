#include "vqs/pauli.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vqs/errors.hpp"

namespace vqs {

char letter_char(Letter l) {
  switch (l) {
    case Letter::I:
      return 'I';
    case Letter::X:
      return 'X';
    case Letter::Y:
      return 'Y';
    case Letter::Z:
      return 'Z';
  }
  throw std::invalid_argument("invalid Pauli letter value");
}

Letter letter_from_char(char c) {
  switch (c) {
    case 'I':
      return Letter::I;
    case 'X':
      return Letter::X;
    case 'Y':
      return Letter::Y;
    case 'Z':
      return Letter::Z;
    default:
      throw ParseError(std::string("invalid Pauli letter '") + c + "'");
  }
}

PauliString::PauliString(int n_qubits) : code_(0), n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count out of range");
  }
}

PauliString PauliString::parse(std::string_view text) {
  if (text.size() > static_cast<std::size_t>(kMaxQubits)) {
    throw ParseError("Pauli word longer than " + std::to_string(kMaxQubits) +
                     " letters");
  }
  PauliString p(static_cast<int>(text.size()));
  for (std::size_t i = 0; i < text.size(); ++i) {
    p.set_letter(static_cast<int>(i) + 1, letter_from_char(text[i]));
  }
  return p;
}

std::string PauliString::str() const {
  std::string out(static_cast<std::size_t>(n_), 'I');
  for (int q = 1; q <= n_; ++q) {
    out[static_cast<std::size_t>(q - 1)] = letter_char(letter(q));
  }
  return out;
}

Letter PauliString::letter(int qubit) const {
  if (qubit < 1 || qubit > n_) {
    throw std::out_of_range("qubit index out of range");
  }
  return static_cast<Letter>((code_ >> (2 * (qubit - 1))) & 3u);
}

void PauliString::set_letter(int qubit, Letter l) {
  if (qubit < 1 || qubit > n_) {
    throw std::out_of_range("qubit index out of range");
  }
  const int shift = 2 * (qubit - 1);
  code_ = (code_ & ~(std::uint64_t{3} << shift)) |
          (static_cast<std::uint64_t>(l) << shift);
}

int PauliString::locality() const {
  return std::popcount(support_mask());
}

bool PauliString::is_identity() const { return code_ == 0; }

std::uint64_t PauliString::support_mask() const {
  std::uint64_t mask = 0;
  std::uint64_t code = code_;
  for (int q = 0; q < n_; ++q) {
    if ((code & 3u) != 0) {
      mask |= std::uint64_t{1} << q;
    }
    code >>= 2;
  }
  return mask;
}

std::uint64_t PauliString::support_mask2() const {
  const std::uint64_t odd = code_ & 0x5555555555555555ULL;
  const std::uint64_t even = code_ & 0xaaaaaaaaaaaaaaaaULL;
  const std::uint64_t any = odd | (even >> 1);
  return any | (any << 1);
}

std::size_t PauliStringHash::operator()(const PauliString& p) const noexcept {
  std::uint64_t h = p.code() + 0x9e3779b97f4a7c15ULL *
                                   static_cast<std::uint64_t>(p.n_qubits());
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(h ^ (h >> 31));
}

std::complex<double> PhasedPauli::phase() const {
  switch (phase_quarter & 3) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

PhasedPauli multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("Pauli word lengths differ");
  }
  PhasedPauli out;
  out.word = PauliString(a.n_qubits());
  int quarter = 0;
  for (int q = 1; q <= a.n_qubits(); ++q) {
    const auto la = static_cast<int>(a.letter(q));
    const auto lb = static_cast<int>(b.letter(q));
    out.word.set_letter(q, static_cast<Letter>(la ^ lb));
    if (la != 0 && lb != 0 && la != lb) {
      // Cyclic X->Y->Z->X products pick up +i, the reverse order -i.
      quarter += (lb == la % 3 + 1) ? 1 : 3;
    }
  }
  out.phase_quarter = quarter & 3;
  return out;
}

PauliString extend_with_x(const PauliString& p) {
  PauliString out(p.n_qubits() + 1);
  out.set_letter(1, Letter::X);
  for (int q = 1; q <= p.n_qubits(); ++q) {
    out.set_letter(q + 1, p.letter(q));
  }
  return out;
}

bool qubitwise_commute(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("Pauli word lengths differ");
  }
  const std::uint64_t overlap = a.support_mask2() & b.support_mask2();
  return (a.code() & overlap) == (b.code() & overlap);
}

double trace_product(std::span<const PauliString> words, int n_qubits) {
  PhasedPauli acc;
  acc.word = PauliString(n_qubits);
  for (const PauliString& w : words) {
    PhasedPauli next = multiply(acc.word, w);
    acc.word = next.word;
    acc.phase_quarter = (acc.phase_quarter + next.phase_quarter) & 3;
  }
  if (!acc.word.is_identity()) {
    return 0.0;
  }
  if (acc.phase_quarter == 1 || acc.phase_quarter == 3) {
    throw std::invalid_argument("trace of this Pauli chain is imaginary");
  }
  const double sign = acc.phase_quarter == 0 ? 1.0 : -1.0;
  return sign * std::ldexp(1.0, n_qubits);
}

ObservableSum::ObservableSum(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > PauliString::kMaxQubits) {
    throw std::invalid_argument("qubit count out of range");
  }
}

ObservableSum ObservableSum::parse(std::string_view text) {
  ObservableSum sum;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#');
        hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::string trimmed;
    for (char c : line) {
      if (c != '\r') {
        trimmed.push_back(c);
      }
    }
    std::istringstream in{trimmed};
    std::string coeff_text;
    if (!(in >> coeff_text)) {
      continue;
    }
    std::string word_text;
    if (!(in >> word_text)) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected '<coefficient> <letters>'");
    }
    std::string extra;
    if (in >> extra) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": trailing text after Pauli word");
    }
    std::size_t consumed = 0;
    double coeff = 0.0;
    try {
      coeff = std::stod(coeff_text, &consumed);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": invalid coefficient '" + coeff_text + "'");
    }
    if (consumed != coeff_text.size() || !std::isfinite(coeff)) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": invalid coefficient '" + coeff_text + "'");
    }
    PauliString word;
    try {
      word = PauliString::parse(word_text);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!sum.empty() && word.n_qubits() != sum.n_qubits()) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": Pauli word length differs from earlier terms");
    }
    sum.add(coeff, word);
  }
  return sum;
}

ObservableSum ObservableSum::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ParseError("cannot open '" + file.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

std::string ObservableSum::format() const {
  std::string out;
  char buf[40];
  for (const Term& t : terms_) {
    std::snprintf(buf, sizeof buf, "%.17g", t.coeff);
    out += buf;
    out += ' ';
    out += t.word.str();
    out += '\n';
  }
  return out;
}

void ObservableSum::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) {
    throw std::runtime_error("cannot write '" + file.string() + "'");
  }
  out << format();
}

void ObservableSum::add(double coeff, const PauliString& word) {
  if (!std::isfinite(coeff)) {
    throw std::invalid_argument("coefficient must be finite");
  }
  if (terms_.empty() && n_ == 0) {
    n_ = word.n_qubits();
  }
  if (word.n_qubits() != n_) {
    throw std::invalid_argument("Pauli word length differs from register");
  }
  const int idx = index_of(word);
  if (idx < 0) {
    if (coeff != 0.0) {
      terms_.push_back(Term{coeff, word});
    }
    return;
  }
  terms_[static_cast<std::size_t>(idx)].coeff += coeff;
  if (terms_[static_cast<std::size_t>(idx)].coeff == 0.0) {
    terms_.erase(terms_.begin() + idx);
  }
}

double ObservableSum::max_abs_coeff() const {
  double best = 0.0;
  for (const Term& t : terms_) {
    best = std::max(best, std::abs(t.coeff));
  }
  return best;
}

ObservableSum ObservableSum::extended_with_x() const {
  ObservableSum out(n_ + 1);
  for (const Term& t : terms_) {
    out.add(t.coeff, extend_with_x(t.word));
  }
  return out;
}

int ObservableSum::index_of(const PauliString& word) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].word == word) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace vqs
