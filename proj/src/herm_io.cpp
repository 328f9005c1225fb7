#include "coatom/herm_io.hpp"

#include <fstream>
#include <stdexcept>

namespace coatom {

nlohmann::json matrix_to_json(const HermitianMatrix& m) {
  const std::size_t d = m.dim();
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (std::size_t r = 0; r < d; ++r) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (std::size_t c = 0; c < d; ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dim", d}, {"re", std::move(re)}, {"im", std::move(im)}};
}

HermitianMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
    throw std::invalid_argument("matrix JSON: expected object with \"dim\" and \"re\"");
  }
  if (!j.at("dim").is_number_unsigned() || j.at("dim").get<std::size_t>() == 0) {
    throw std::invalid_argument("matrix JSON: \"dim\" must be a positive integer");
  }
  const std::size_t d = j.at("dim").get<std::size_t>();
  auto read_part = [&](const char* key, bool required) {
    std::vector<double> out(d * d, 0.0);
    if (!j.contains(key)) {
      if (required) throw std::invalid_argument(std::string("matrix JSON: missing ") + key);
      return out;
    }
    const auto& rows = j.at(key);
    if (!rows.is_array() || rows.size() != d) {
      throw std::invalid_argument(std::string("matrix JSON: \"") + key + "\" must have dim rows");
    }
    for (std::size_t r = 0; r < d; ++r) {
      const auto& row = rows[r];
      if (!row.is_array() || row.size() != d) {
        throw std::invalid_argument(std::string("matrix JSON: row of \"") + key +
                                    "\" must have dim entries");
      }
      for (std::size_t c = 0; c < d; ++c) {
        if (!row[c].is_number()) throw std::invalid_argument("matrix JSON: non-numeric entry");
        out[r * d + c] = row[c].get<double>();
      }
    }
    return out;
  };
  const auto re = read_part("re", true);
  const auto im = read_part("im", false);
  std::vector<Complex> entries(d * d);
  for (std::size_t i = 0; i < d * d; ++i) entries[i] = {re[i], im[i]};
  return HermitianMatrix(ComplexMatrix(d, std::move(entries)));
}

HermitianMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("matrix file " + path + ": " + e.what());
  }
  return matrix_from_json(j);
}

void write_matrix_file(const std::string& path, const HermitianMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  out << matrix_to_json(m).dump(2) << '\n';
}

}  // namespace coatom
