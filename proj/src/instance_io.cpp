#include "qminv/instance_io.hpp"

#include <fstream>

namespace qminv {

namespace {

nlohmann::json vector_json(const IntVector& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

IntVector vector_from(const nlohmann::json& arr, Eigen::Index n, const char* what) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != n)
    throw std::invalid_argument(std::string("instance field '") + what + "' must be an array of length n");
  IntVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = arr.at(i).get<Integer>();
  return v;
}

}  // namespace

nlohmann::json to_json(const InstanceFile& instance) {
  const LinearSystem& sys = instance.system;
  nlohmann::json doc;
  doc["n"] = sys.n();
  doc["M"] = sys.M();
  doc["mode"] = to_string(sys.mode());
  auto rows = nlohmann::json::array();
  for (int i = 0; i < sys.n(); ++i) rows.push_back(vector_json(sys.A().row(i).transpose()));
  doc["A"] = rows;
  doc["b"] = vector_json(sys.b());
  doc["seed"] = instance.seed;
  if (instance.solution) doc["solution"] = vector_json(*instance.solution);
  return doc;
}

InstanceFile instance_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    if (n < 1) throw std::invalid_argument("instance n must be positive");
    const auto& rows = doc.at("A");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw std::invalid_argument("instance field 'A' must have n rows");
    IntMatrix A(n, n);
    for (int i = 0; i < n; ++i) A.row(i) = vector_from(rows.at(i), n, "A").transpose();

    InstanceFile out{LinearSystem(A, vector_from(doc.at("b"), n, "b"), doc.at("M").get<Integer>(),
                                  parse_mode(doc.at("mode").get<std::string>())),
                     doc.value("seed", std::uint64_t{0}), std::nullopt};
    if (doc.contains("solution")) out.solution = vector_from(doc.at("solution"), n, "solution");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance: ") + e.what());
  }
}

InstanceFile read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("cannot parse instance file '" + path + "': " + e.what());
  }
  return instance_from_json(doc);
}

void write_instance(const InstanceFile& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file '" + path + "'");
  out << to_json(instance).dump(2) << '\n';
}

}  // namespace qminv
