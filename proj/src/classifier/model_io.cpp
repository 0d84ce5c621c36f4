#include "deadlisten/classifier/model_io.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

#include "deadlisten/corpus/csv.hpp"
#include "deadlisten/corpus/path_codec.hpp"

namespace deadlisten::classifier {

using nlohmann::ordered_json;

namespace {

ordered_json entry_json(const ModelEntry& e) {
  const PairStatistics& s = e.classification.stats;
  ordered_json j;
  j["path"] = e.path;
  j["event"] = e.event;
  j["k"] = s.k;
  j["n_a"] = s.n_a;
  j["n_e"] = s.n_e;
  j["k_cum_path"] = s.k_cum_path;
  j["k_cum_event"] = s.k_cum_event;
  j["bcdf_path"] = e.classification.bcdf_path;
  j["bcdf_event"] = e.classification.bcdf_event;
  return j;
}

ordered_json entries_json(const std::vector<ModelEntry>& entries) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : entries) arr.push_back(entry_json(e));
  return arr;
}

}  // namespace

void write_model_json(std::ostream& out, const Model& model) {
  ordered_json j;
  j["config"] = {{"p_a", model.config.p_a},
                 {"p_e", model.config.p_e},
                 {"p_ca", model.config.p_ca},
                 {"p_ce", model.config.p_ce}};
  ordered_json packages = ordered_json::object();
  for (const auto& [pkg, pm] : model.packages) {
    packages[pkg] = {{"anomalous", entries_json(pm.anomalous)},
                     {"expected", entries_json(pm.expected)},
                     {"unclassified", entries_json(pm.unclassified)}};
  }
  j["packages"] = std::move(packages);
  out << j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

Model read_model_json(std::istream& in, const std::string& source) {
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  auto fail = [&](const std::string& why) { return corpus::FormatError(source, 0, why); };
  if (j.is_discarded() || !j.is_object()) throw fail("model is not a JSON object");
  Model model;
  try {
    const auto& c = j.at("config");
    model.config = Config{c.at("p_a").get<double>(), c.at("p_e").get<double>(), c.at("p_ca").get<double>(),
                          c.at("p_ce").get<double>()};
    model.config.validate();
    for (const auto& [pkg, pm_json] : j.at("packages").items()) {
      PackageModel& pm = model.packages[pkg];
      auto read = [&](const char* key, Verdict verdict, std::vector<ModelEntry>& dst) {
        for (const auto& ej : pm_json.at(key)) {
          ModelEntry e;
          e.path = ej.at("path").get<std::string>();
          e.event = ej.at("event").get<std::string>();
          if (corpus::root_package_of(e.path) != pkg) throw fail("entry path outside its package: " + e.path);
          corpus::parse_path(e.path);
          PairStatistics& s = e.classification.stats;
          s.k = ej.at("k").get<std::uint64_t>();
          s.n_a = ej.at("n_a").get<std::uint64_t>();
          s.n_e = ej.at("n_e").get<std::uint64_t>();
          s.k_cum_path = ej.at("k_cum_path").get<std::uint64_t>();
          s.k_cum_event = ej.at("k_cum_event").get<std::uint64_t>();
          e.classification.bcdf_path = ej.at("bcdf_path").get<double>();
          e.classification.bcdf_event = ej.at("bcdf_event").get<double>();
          e.classification.verdict = verdict;
          dst.push_back(std::move(e));
        }
        std::sort(dst.begin(), dst.end(), [](const ModelEntry& a, const ModelEntry& b) {
          return std::tie(a.path, a.event) < std::tie(b.path, b.event);
        });
      };
      read("anomalous", Verdict::Anomalous, pm.anomalous);
      read("expected", Verdict::Expected, pm.expected);
      read("unclassified", Verdict::Unclassified, pm.unclassified);
    }
  } catch (const nlohmann::json::exception& e) {
    throw fail(std::string("malformed model: ") + e.what());
  } catch (const corpus::PathSyntaxError& e) {
    throw fail(e.what());
  }
  return model;
}

}  // namespace deadlisten::classifier
