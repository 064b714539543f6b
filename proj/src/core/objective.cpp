#include "dgs/objective.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "dgs/error.hpp"

namespace dgs {

namespace {

std::string describe_point(std::span<const double> x) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  const std::size_t shown = x.size() < 8 ? x.size() : 8;
  for (std::size_t i = 0; i < shown; ++i) out << (i ? ", " : "") << x[i];
  if (shown < x.size()) out << ", ... [" << x.size() << " coordinates]";
  out << ')';
  return out.str();
}

}  // namespace

EvaluationError::EvaluationError(const std::string& what, std::vector<double> point,
                                 std::optional<std::size_t> direction,
                                 std::optional<std::size_t> node)
    : Error(what), point_(std::move(point)), direction_(direction), node_(node) {}

EvaluationError EvaluationError::with_location(std::optional<std::size_t> direction,
                                               std::optional<std::size_t> node) const {
  std::string message = what();
  if (direction) message += " [direction " + std::to_string(*direction) + "]";
  if (node) message += " [node " + std::to_string(*node) + "]";
  return EvaluationError(message, point_, direction, node);
}

Objective::Objective(std::size_t dimension, Function fn, std::optional<Box> domain)
    : dimension_(dimension), fn_(std::move(fn)), domain_(std::move(domain)) {
  if (dimension == 0) throw InvalidArgument("objective dimension must be at least 1");
  if (!fn_) throw InvalidArgument("objective function is empty");
  if (domain_ && (static_cast<std::size_t>(domain_->lower.size()) != dimension ||
                  static_cast<std::size_t>(domain_->upper.size()) != dimension)) {
    throw InvalidArgument("objective domain bounds do not match its dimension");
  }
}

double Objective::operator()(std::span<const double> x) const {
  if (x.size() != dimension_) {
    throw InvalidArgument("point has " + std::to_string(x.size()) +
                          " coordinates, objective expects " + std::to_string(dimension_));
  }
  count_.fetch_add(1, std::memory_order_relaxed);
  double value = 0.0;
  try {
    value = fn_(x);
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(std::string("objective failed at ") + describe_point(x) + ": " + e.what(),
                          {x.begin(), x.end()});
  }
  if (!std::isfinite(value)) {
    throw EvaluationError("objective returned a non-finite value at " + describe_point(x),
                          {x.begin(), x.end()});
  }
  return value;
}

}  // namespace dgs
