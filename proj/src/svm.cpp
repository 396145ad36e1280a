#include "imst/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace imst {

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
  const std::size_t n = a.size();
  if (type == KernelType::kLinear) {
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
    return dot;
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

void SvmParams::validate() const {
  if (budget == 0) throw std::invalid_argument("svm budget must be at least 1");
  if (!(C > 0.0)) throw std::invalid_argument("svm C must be positive");
  if (kernel.type == KernelType::kGaussian && !(kernel.gamma > 0.0)) {
    throw std::invalid_argument("gaussian kernel gamma must be positive");
  }
  if (!std::isfinite(bias)) throw std::invalid_argument("svm bias must be finite");
}

BudgetedSvm::BudgetedSvm(SvmParams params) : params_(params) { params_.validate(); }

SupportVectorView BudgetedSvm::support_vector(std::size_t i) const {
  return {std::span<const double>(vectors_).subspan(i * dim_, dim_), labels_[i], betas_[i],
          serials_[i]};
}

void BudgetedSvm::check_dimension(std::span<const double> x) const {
  if (dim_ != 0 && x.size() != dim_) {
    throw DimensionMismatch("feature length " + std::to_string(x.size()) +
                            " does not match model dimension " + std::to_string(dim_));
  }
}

double BudgetedSvm::score(std::span<const double> x) const {
  if (empty()) return 0.0;
  check_dimension(x);
  double s = 0.0;
  const double* row = vectors_.data();
  for (std::size_t i = 0; i < labels_.size(); ++i, row += dim_) {
    s += betas_[i] * params_.kernel(std::span<const double>(row, dim_), x);
  }
  return s + params_.bias;
}

int BudgetedSvm::classify(std::span<const double> x, double tau) const {
  return sign_label(score(x) - tau);
}

bool BudgetedSvm::update(const LabeledExample& example) {
  if (example.label != 1 && example.label != -1) {
    throw std::invalid_argument("labels must be -1 or +1");
  }
  check_dimension(example.features);
  const double y = example.label;
  const double margin = y * score(example.features);
  if (margin >= 1.0) return false;
  const double kxx = params_.kernel(example.features, example.features);
  if (!(kxx > 0.0)) return false;  // zero vector under a linear kernel carries no direction
  const double beta = y * std::min(params_.C, (1.0 - margin) / kxx);
  push(example.features, example.label, beta, next_serial_++);
  enforce_budget();
  return true;
}

std::size_t BudgetedSvm::update(std::span<const LabeledExample> batch) {
  std::size_t added = 0;
  for (const auto& ex : batch) added += update(ex) ? 1 : 0;
  return added;
}

void BudgetedSvm::add_support_vector(std::span<const double> x, int label, double beta) {
  if (label != 1 && label != -1) throw std::invalid_argument("labels must be -1 or +1");
  if (std::abs(beta) > params_.C) throw std::invalid_argument("|beta| exceeds C");
  if (beta * label < 0.0) throw std::invalid_argument("beta sign disagrees with label");
  check_dimension(x);
  push(x, label, beta, next_serial_++);
  enforce_budget();
}

void BudgetedSvm::push(std::span<const double> x, int label, double beta, std::uint64_t serial) {
  if (dim_ == 0) dim_ = x.size();
  vectors_.insert(vectors_.end(), x.begin(), x.end());
  labels_.push_back(label);
  betas_.push_back(beta);
  self_kernel_.push_back(params_.kernel(x, x));
  serials_.push_back(serial);
}

void BudgetedSvm::enforce_budget() {
  while (size() > params_.budget) evict();
}

void BudgetedSvm::evict() {
  if (empty()) throw std::logic_error("evict on an empty model");
  std::size_t victim = 0;
  double best = betas_[0] * betas_[0] * self_kernel_[0];
  for (std::size_t i = 1; i < size(); ++i) {
    const double impact = betas_[i] * betas_[i] * self_kernel_[i];
    if (impact < best || (impact == best && serials_[i] < serials_[victim])) {
      best = impact;
      victim = i;
    }
  }
  erase(victim);
}

void BudgetedSvm::erase(std::size_t index) {
  const auto first = vectors_.begin() + static_cast<std::ptrdiff_t>(index * dim_);
  vectors_.erase(first, first + static_cast<std::ptrdiff_t>(dim_));
  labels_.erase(labels_.begin() + static_cast<std::ptrdiff_t>(index));
  betas_.erase(betas_.begin() + static_cast<std::ptrdiff_t>(index));
  self_kernel_.erase(self_kernel_.begin() + static_cast<std::ptrdiff_t>(index));
  serials_.erase(serials_.begin() + static_cast<std::ptrdiff_t>(index));
}

namespace {

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_double(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw std::runtime_error("svm snapshot: bad number '" + tok + "'");
  return v;
}

template <typename T>
T parse_unsigned(const std::string& tok) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0') throw std::runtime_error("svm snapshot: bad integer '" + tok + "'");
  return static_cast<T>(v);
}

void expect(std::istream& in, const std::string& keyword) {
  std::string tok;
  if (!(in >> tok) || tok != keyword) {
    throw std::runtime_error("svm snapshot: expected '" + keyword + "'");
  }
}

std::string next(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw std::runtime_error("svm snapshot: unexpected end of input");
  return tok;
}

}  // namespace

// Format, one record per line:
//   imst-svm 1
//   kernel <linear|gaussian> <gamma>
//   budget <B | unbounded>
//   C <C>
//   bias <bias>
//   dimension <D>
//   next_serial <n>
//   count <N>
//   sv <label> <beta> <serial> <x_1> ... <x_D>     (N lines)
std::string BudgetedSvm::serialize() const {
  std::ostringstream out;
  out << "imst-svm 1\n";
  out << "kernel " << (params_.kernel.type == KernelType::kLinear ? "linear" : "gaussian") << ' '
      << hex(params_.kernel.gamma) << '\n';
  out << "budget ";
  if (params_.budget == kUnboundedBudget) {
    out << "unbounded\n";
  } else {
    out << params_.budget << '\n';
  }
  out << "C " << hex(params_.C) << '\n';
  out << "bias " << hex(params_.bias) << '\n';
  out << "dimension " << dim_ << '\n';
  out << "next_serial " << next_serial_ << '\n';
  out << "count " << size() << '\n';
  for (std::size_t i = 0; i < size(); ++i) {
    out << "sv " << labels_[i] << ' ' << hex(betas_[i]) << ' ' << serials_[i];
    for (double v : support_vector(i).x) out << ' ' << hex(v);
    out << '\n';
  }
  return out.str();
}

BudgetedSvm BudgetedSvm::deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  expect(in, "imst-svm");
  if (next(in) != "1") throw std::runtime_error("svm snapshot: unsupported version");
  SvmParams params;
  expect(in, "kernel");
  const std::string kind = next(in);
  if (kind == "linear") {
    params.kernel.type = KernelType::kLinear;
  } else if (kind == "gaussian") {
    params.kernel.type = KernelType::kGaussian;
  } else {
    throw std::runtime_error("svm snapshot: unknown kernel '" + kind + "'");
  }
  params.kernel.gamma = parse_double(next(in));
  expect(in, "budget");
  const std::string budget = next(in);
  params.budget = budget == "unbounded" ? kUnboundedBudget : parse_unsigned<std::size_t>(budget);
  expect(in, "C");
  params.C = parse_double(next(in));
  expect(in, "bias");
  params.bias = parse_double(next(in));

  BudgetedSvm model(params);
  expect(in, "dimension");
  const auto dim = parse_unsigned<std::size_t>(next(in));
  expect(in, "next_serial");
  const auto next_serial = parse_unsigned<std::uint64_t>(next(in));
  expect(in, "count");
  const auto count = parse_unsigned<std::size_t>(next(in));
  if (count > params.budget) throw std::runtime_error("svm snapshot: support set exceeds budget");
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < count; ++i) {
    expect(in, "sv");
    const std::string label_tok = next(in);
    const int label = label_tok == "1" ? 1 : label_tok == "-1" ? -1 : 0;
    if (label == 0) throw std::runtime_error("svm snapshot: bad label '" + label_tok + "'");
    const double beta = parse_double(next(in));
    const auto serial = parse_unsigned<std::uint64_t>(next(in));
    for (auto& v : x) v = parse_double(next(in));
    if (std::abs(beta) > params.C || beta * label < 0.0) {
      throw std::runtime_error("svm snapshot: coefficient violates |beta| <= C or sign rule");
    }
    model.push(x, label, beta, serial);
  }
  model.dim_ = count == 0 ? dim : model.dim_;
  model.next_serial_ = next_serial;
  return model;
}

bool operator==(const BudgetedSvm& a, const BudgetedSvm& b) {
  return a.params_.kernel.type == b.params_.kernel.type &&
         a.params_.kernel.gamma == b.params_.kernel.gamma && a.params_.budget == b.params_.budget &&
         a.params_.C == b.params_.C && a.params_.bias == b.params_.bias && a.dim_ == b.dim_ &&
         a.vectors_ == b.vectors_ && a.labels_ == b.labels_ && a.betas_ == b.betas_ &&
         a.serials_ == b.serials_ && a.next_serial_ == b.next_serial_;
}

}  // namespace imst
