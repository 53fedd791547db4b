#include "edgepost/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "edgepost/errors.hpp"
#include "json.hpp"

namespace edgepost {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_posteriors_csv(std::ostream& out, const EdgePosteriors& posteriors) {
  for (unsigned u = 0; u < posteriors.n; ++u) {
    for (unsigned v = 0; v < posteriors.n; ++v) out << (v ? "," : "") << format_double(posteriors(u, v));
    out << '\n';
  }
}

std::string posteriors_to_json(const EdgePosteriors& p) {
  json doc;
  doc["n"] = p.n;
  doc["names"] = p.names;
  doc["k"] = p.prior.k;
  doc["prior"] = to_string(p.prior.rho);
  doc["score"] = to_string(p.prior.score.family);
  if (p.prior.score.family == ScoreFamily::bdeu) doc["ess"] = p.prior.score.ess;
  doc["log_marginal"] = p.log_marginal.log();
  doc["posteriors"] = p.probabilities;
  doc["elapsed_ms"] = p.elapsed_ms;
  doc["seed_info"] = p.seed_info.empty() ? json(nullptr) : json(p.seed_info);
  return doc.dump(2) + "\n";
}

EdgePosteriors posteriors_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    EdgePosteriors p;
    p.n = doc.at("n").get<unsigned>();
    p.names = doc.at("names").get<std::vector<std::string>>();
    p.probabilities = doc.at("posteriors").get<std::vector<double>>();
    p.prior.k = doc.value("k", 0u);
    if (doc.contains("prior")) p.prior.rho = parse_rho_family(doc["prior"].get<std::string>());
    if (doc.contains("score")) p.prior.score.family = parse_score_family(doc["score"].get<std::string>());
    p.prior.score.ess = doc.value("ess", 1.0);
    const json& lm = doc.at("log_marginal");
    p.log_marginal = lm.is_null() ? LogWeight::zero() : LogWeight::from_log(lm.get<double>());
    p.elapsed_ms = doc.value("elapsed_ms", 0.0);
    if (doc.contains("seed_info") && doc["seed_info"].is_string()) p.seed_info = doc["seed_info"].get<std::string>();
    if (p.names.size() != p.n || p.probabilities.size() != std::size_t{p.n} * p.n) {
      throw ParseError(ParseError::Kind::bad_document, 1, "posterior matrix does not match n");
    }
    return p;
  } catch (const json::exception& e) {
    throw ParseError(ParseError::Kind::bad_document, 1, std::string("posterior document: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(ParseError::Kind::bad_document, 1, e.what());
  }
}

std::string network_to_json(const GroundTruthNetwork& net) {
  json doc;
  doc["n"] = net.n;
  doc["k"] = net.k;
  doc["r"] = net.r;
  doc["seed"] = net.seed;
  doc["order"] = net.order;
  json parents = json::array();
  for (NodeSet p : net.parents) parents.push_back(p.members());
  doc["parents"] = parents;
  doc["cpts"] = net.cpts;
  return doc.dump(2) + "\n";
}

GroundTruthNetwork network_from_json(const std::string& text) {
  GroundTruthNetwork net;
  try {
    const json doc = json::parse(text);
    net.n = doc.at("n").get<unsigned>();
    net.k = doc.at("k").get<unsigned>();
    net.r = doc.at("r").get<unsigned>();
    net.seed = doc.value("seed", std::uint64_t{0});
    net.order = doc.at("order").get<std::vector<unsigned>>();
    for (const auto& list : doc.at("parents")) {
      NodeSet p;
      for (unsigned u : list.get<std::vector<unsigned>>()) {
        if (u >= 64) throw ParseError(ParseError::Kind::bad_document, 1, "parent index out of range");
        p = p.with(u);
      }
      net.parents.push_back(p);
    }
    net.cpts = doc.at("cpts").get<std::vector<std::vector<std::vector<double>>>>();
  } catch (const json::exception& e) {
    throw ParseError(ParseError::Kind::bad_document, 1, std::string("network document: ") + e.what());
  }
  net.validate();
  return net;
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "fpr,tpr,threshold\n";
  for (const auto& p : curve.points) {
    out << format_double(p.fpr) << ',' << format_double(p.tpr) << ',' << format_double(p.threshold) << '\n';
  }
}

void write_study_report(std::ostream& out, std::span<const StudyRow> rows) {
  out << "n,k,r,replicate,seed,m,auc,n_true_edges,elapsed_ms\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.k << ',' << row.r << ',' << row.replicate << ',' << row.seed << ',' << row.m << ','
        << format_double(row.auc) << ',' << row.true_edges << ',' << format_double(row.elapsed_ms) << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void save_posteriors(const std::filesystem::path& path, const EdgePosteriors& posteriors) {
  if (path.extension() == ".csv") {
    std::ostringstream out;
    write_posteriors_csv(out, posteriors);
    write_text_file(path, out.str());
  } else {
    write_text_file(path, posteriors_to_json(posteriors));
  }
}

EdgePosteriors load_posteriors(const std::filesystem::path& path) { return posteriors_from_json(read_text_file(path)); }

void save_network(const std::filesystem::path& path, const GroundTruthNetwork& net) {
  write_text_file(path, network_to_json(net));
}

GroundTruthNetwork load_network(const std::filesystem::path& path) { return network_from_json(read_text_file(path)); }

void save_roc_csv(const std::filesystem::path& path, const RocCurve& curve) {
  std::ostringstream out;
  write_roc_csv(out, curve);
  write_text_file(path, out.str());
}

}  // namespace edgepost
