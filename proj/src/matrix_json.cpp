#include "matrixcs/matrix_json.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace matrixcs {

nlohmann::json matrix_to_json(const CMatrix &m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const nlohmann::json &j) {
  try {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto &data = j.at("data");
    if (rows < 1 || cols < 1)
      throw Error(ErrorCode::ParseError, "matrix JSON: rows/cols must be positive");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
      throw Error(ErrorCode::ParseError, "matrix JSON: data length != rows * cols");
    CMatrix m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j2 = 0; j2 < cols; ++j2, ++idx) {
        const auto &entry = data.at(static_cast<size_t>(idx));
        if (entry.size() != 2)
          throw Error(ErrorCode::ParseError, "matrix JSON: entry is not [re, im]");
        m(i, j2) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
      }
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("matrix JSON: ") + e.what());
  }
}

std::string matrix_to_string(const CMatrix &m) { return matrix_to_json(m).dump(); }

CMatrix matrix_from_string(const std::string &text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::ParseError, "matrix JSON: malformed document");
  return matrix_from_json(j);
}

CMatrix load_matrix(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return matrix_from_string(text);
}

void save_matrix(const std::string &path, const CMatrix &m) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  out << matrix_to_json(m).dump(2) << "\n";
}

} // namespace matrixcs
