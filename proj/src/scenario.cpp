#include "drlab/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "drlab/rng.hpp"

namespace drlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> parse_args(const std::string& body) {
  std::vector<double> args;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad numeric argument: " + tok);
    args.push_back(v);
  }
  return args;
}

void need_args(const std::string& name, const std::vector<double>& args, std::size_t n) {
  if (args.size() != n) {
    std::ostringstream os;
    os << "function '" << name << "' expects " << n << " arguments, got " << args.size();
    throw std::invalid_argument(os.str());
  }
}

int cells_arg(double v) {
  const int cells = static_cast<int>(v);
  if (cells < 1 || static_cast<double>(cells) != v) {
    throw std::invalid_argument("cell count must be a positive integer");
  }
  return cells;
}

}  // namespace

Evaluable make_function(const std::string& spec, int dim) {
  const std::size_t colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : parse_args(spec.substr(colon + 1));

  if (name == "constant") {
    need_args(name, args, 1);
    return constant_fn(args[0]);
  }
  if (name == "ramp") {
    need_args(name, args, 2);
    const double lo = args[0];
    const double hi = args[1];
    return analytic([lo, hi](const Point& x) { return lo + (hi - lo) * x[0]; });
  }
  if (name == "sin") {
    need_args(name, args, 4);
    const double base = args[0], amp = args[1], freq = args[2], phase = args[3];
    return analytic([base, amp, freq, phase](const Point& x) {
      return base + amp * std::sin(kTwoPi * freq * x[0] + phase);
    });
  }
  if (name == "pcsin") {
    need_args(name, args, 5);
    const double base = args[1], amp = args[2], freq = args[3], phase = args[4];
    return piecewise_constant_profile(cells_arg(args[0]), [=](double t) {
      return base + amp * std::sin(kTwoPi * freq * t + phase);
    });
  }
  if (name == "pcramp") {
    need_args(name, args, 3);
    const double lo = args[1], hi = args[2];
    return piecewise_constant_profile(cells_arg(args[0]),
                                      [=](double t) { return lo + (hi - lo) * t; });
  }
  if (name == "twolevel") {
    need_args(name, args, 2);
    return piecewise_constant(2, {args[0], args[1]});
  }
  if (name == "pcrand") {
    need_args(name, args, 4);
    const int cells = cells_arg(args[0]);
    const double lo = args[1], hi = args[2];
    CounterRng rng(static_cast<std::uint64_t>(args[3]), 0);
    std::vector<double> vals(static_cast<std::size_t>(cells));
    for (double& v : vals) v = lo + (hi - lo) * rng.next_unit();
    return piecewise_constant(cells, std::move(vals));
  }
  if (name == "checker") {
    need_args(name, args, 1);
    return checkerboard(dim, cells_arg(args[0]));
  }
  throw std::invalid_argument("unknown function spec: " + spec);
}

double BudgetLaw::at(std::uint64_t n) const {
  return power == 0.0 ? coef : coef * std::pow(static_cast<double>(n), power);
}

BudgetLaw parse_budget_law(const std::string& spec) {
  BudgetLaw law;
  const std::size_t star = spec.find('*');
  if (star == std::string::npos) {
    std::size_t used = 0;
    law.coef = std::stod(spec, &used);
    if (used != spec.size()) throw std::invalid_argument("bad budget spec: " + spec);
    return law;
  }
  std::size_t used = 0;
  law.coef = std::stod(spec.substr(0, star), &used);
  const std::string tail = spec.substr(star + 1);
  if (tail.rfind("n^", 0) != 0) {
    throw std::invalid_argument("budget spec must look like 'c' or 'c*n^p': " + spec);
  }
  law.power = std::stod(tail.substr(2), &used);
  return law;
}

}  // namespace drlab
