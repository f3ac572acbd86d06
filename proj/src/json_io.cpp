#include "perclab/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "perclab/output.hpp"

namespace perclab {

using nlohmann::json;

json to_json(const PatternPartition& pp) {
  json classes = json::object();
  for (std::size_t a = 0; a < pp.classes.size(); ++a) {
    json idx = json::array();
    for (const auto j : pp.classes[a]) idx.push_back(j + 1);
    classes[std::to_string(a)] = std::move(idx);
  }
  return json{{"first", pp.first.to_string()}, {"classes", std::move(classes)}};
}

PatternPartition partition_from_json(const json& j) {
  PatternPartition pp;
  pp.first = SpinVector::parse(j.at("first").get<std::string>());
  const auto& classes = j.at("classes");
  if (!classes.is_object() || classes.empty()) throw MalformedEncodingError("partition JSON: 'classes' must be a non-empty object");
  pp.classes.resize(classes.size());
  for (const auto& [key, value] : classes.items()) {
    std::size_t pos = 0;
    const unsigned long a = std::stoul(key, &pos);
    if (pos != key.size() || a >= pp.classes.size()) {
      throw MalformedEncodingError("partition JSON: bad pattern key '" + key + "'");
    }
    for (const auto& idx : value) {
      const auto one_based = idx.get<std::uint64_t>();
      if (one_based == 0 || one_based > pp.first.n()) {
        throw MalformedEncodingError("partition JSON: index " + std::to_string(one_based) + " out of range");
      }
      pp.classes[a].push_back(static_cast<std::uint32_t>(one_based - 1));
    }
    std::sort(pp.classes[a].begin(), pp.classes[a].end());
  }
  (void)pp.k();
  return pp;
}

json to_json(const Disorder& d) {
  return json{{"n", d.params().n()},
              {"kappa", d.params().kappa()},
              {"active", std::vector<std::uint64_t>(d.active().begin(), d.active().end())}};
}

Disorder disorder_from_json(const json& j) {
  const auto n = j.at("n").get<unsigned>();
  const auto kappa = j.at("kappa").get<double>();
  return Disorder(ModelParams(n, kappa), j.at("active").get<std::vector<std::uint64_t>>());
}

json to_json(const SolveResult& r) {
  return json{{"empty", r.empty},
              {"count", r.count},
              {"witness", r.witness ? json(r.witness->to_string()) : json(nullptr)},
              {"backend", to_string(r.backend)}};
}

Disorder read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("instance file " + path.string() + " is not valid JSON: " + e.what());
  }
  return disorder_from_json(j);
}

void write_instance(const std::filesystem::path& path, const Disorder& d) {
  write_atomically(path, to_json(d).dump(2) + "\n");
}

}  // namespace perclab
