#include "entangle/states.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entangle/errors.hpp"

namespace entangle {

namespace {

void require_fraction(double x, const char* who) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidArgument(std::string(who) + ": x = " + std::to_string(x) +
                          " is outside [0, 1]");
  }
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

BipartiteState::BipartiteState(std::size_t dim_a, std::size_t dim_b, ComplexMatrix rho)
    : dim_a_(dim_a), dim_b_(dim_b), rho_(std::move(rho)) {
  if (dim_a == 0 || dim_b == 0) throw InvalidState("dimensions must be positive");
  if (rho_.rows() != dim_a * dim_b || rho_.cols() != dim_a * dim_b) {
    throw InvalidState("density matrix is " + std::to_string(rho_.rows()) + "x" +
                       std::to_string(rho_.cols()) + ", expected " +
                       std::to_string(dim_a * dim_b) + "x" + std::to_string(dim_a * dim_b));
  }
  for (const auto& z : rho_.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidState("density matrix has non-finite entries");
    }
  }
  if (const double defect = hermiticity_defect(rho_); defect > kStateTolerance) {
    throw InvalidState("not Hermitian (defect " + format_value(defect) + ")");
  }
  if (const Complex tr = trace(rho_); std::abs(tr - 1.0) > kStateTolerance) {
    throw InvalidState("trace is " + format_value(tr.real()) + ", expected 1");
  }
  const double lowest = hermitian_eigenvalues(rho_).front();
  if (lowest < -kStateTolerance) {
    throw InvalidState("negative eigenvalue " + format_value(lowest));
  }
}

BipartiteState singlet_projector() {
  ComplexMatrix s(4, 4);
  s(1, 1) = 0.5;
  s(2, 2) = 0.5;
  s(1, 2) = -0.5;
  s(2, 1) = -0.5;
  return {2, 2, std::move(s)};
}

BipartiteState werner_state(WernerParams p) {
  require_fraction(p.x, "werner_state");
  ComplexMatrix rho = singlet_projector().rho() * p.x;
  rho += ComplexMatrix::identity(4) * ((1.0 - p.x) / 4.0);
  return {2, 2, std::move(rho)};
}

BipartiteState gisin_state(const GisinParams& p) {
  require_fraction(p.x, "gisin_state");
  const double norm2 = std::norm(p.a) + std::norm(p.b);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw InvalidArgument("gisin_state: |a|^2 + |b|^2 = " + std::to_string(norm2) +
                          ", expected 1");
  }
  ComplexMatrix rho(4, 4);
  rho(0, 0) = (1.0 - p.x) / 2.0;
  rho(3, 3) = (1.0 - p.x) / 2.0;
  rho(1, 1) = p.x * std::norm(p.a);
  rho(2, 2) = p.x * std::norm(p.b);
  rho(1, 2) = p.x * p.a * std::conj(p.b);
  rho(2, 1) = std::conj(rho(1, 2));
  return {2, 2, std::move(rho)};
}

BipartiteState singlet_plus_polarized(double x) {
  require_fraction(x, "singlet_plus_polarized");
  ComplexMatrix rho = singlet_projector().rho() * x;
  rho(0, 0) += 1.0 - x;
  return {2, 2, std::move(rho)};
}

nlohmann::json state_to_json(const BipartiteState& s) {
  const auto& rho = s.rho();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (std::size_t i = 0; i < rho.rows(); ++i) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (std::size_t j = 0; j < rho.cols(); ++j) {
      re_row.push_back(rho(i, j).real());
      im_row.push_back(rho(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"dims", {s.dim_a(), s.dim_b()}}, {"re", std::move(re)}, {"im", std::move(im)}};
}

BipartiteState state_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("state: expected a JSON object");
  for (const char* key : {"dims", "re", "im"}) {
    if (!j.contains(key)) throw ParseError(std::string("state: missing field '") + key + "'");
  }
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_unsigned() ||
      !dims[1].is_number_unsigned()) {
    throw ParseError("state: 'dims' must be two positive integers");
  }
  const auto dim_a = dims[0].get<std::size_t>();
  const auto dim_b = dims[1].get<std::size_t>();
  if (dim_a == 0 || dim_b == 0) throw ParseError("state: 'dims' must be two positive integers");
  const std::size_t d = dim_a * dim_b;

  auto read_part = [&](const char* key) {
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.size() != d) {
      throw ParseError(std::string("state: '") + key + "' must have " + std::to_string(d) +
                       " rows");
    }
    std::vector<double> values;
    values.reserve(d * d);
    for (const auto& row : arr) {
      if (!row.is_array() || row.size() != d) {
        throw ParseError(std::string("state: '") + key + "' rows must have " +
                         std::to_string(d) + " entries");
      }
      for (const auto& v : row) {
        if (!v.is_number()) throw ParseError(std::string("state: '") + key + "' has a non-number");
        values.push_back(v.get<double>());
      }
    }
    return values;
  };
  const auto re = read_part("re");
  const auto im = read_part("im");

  ComplexMatrix rho(d, d);
  for (std::size_t k = 0; k < d * d; ++k) rho.data()[k] = Complex(re[k], im[k]);
  return {dim_a, dim_b, std::move(rho)};
}

BipartiteState state_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return state_from_json(j);
}

void state_to_file(const BipartiteState& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << state_to_json(s).dump(2) << '\n';
}

}  // namespace entangle
