#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "edgepost/engine.hpp"
#include "edgepost/study.hpp"

namespace edgepost {

/// Shortest text that reads back as the same double, at most 17 significant
/// digits. Infinities print as "inf" / "-inf".
std::string format_double(double value);

/// n lines of n comma-separated probabilities.
void write_posteriors_csv(std::ostream& out, const EdgePosteriors& posteriors);

/// {"n","names","k","prior","score","log_marginal","posteriors","elapsed_ms","seed_info"};
/// "ess" is added for bdeu, and "posteriors" is the row-major n*n array.
std::string posteriors_to_json(const EdgePosteriors& posteriors);
/// Throws ParseError on a malformed document.
EdgePosteriors posteriors_from_json(const std::string& text);

std::string network_to_json(const GroundTruthNetwork& net);
/// Throws ParseError on a malformed document, PreconditionError on an invalid network.
GroundTruthNetwork network_from_json(const std::string& text);

/// Header fpr,tpr,threshold.
void write_roc_csv(std::ostream& out, const RocCurve& curve);
/// Header n,k,r,replicate,seed,m,auc,n_true_edges,elapsed_ms.
void write_study_report(std::ostream& out, std::span<const StudyRow> rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

void save_posteriors(const std::filesystem::path& path, const EdgePosteriors& posteriors);
EdgePosteriors load_posteriors(const std::filesystem::path& path);
void save_network(const std::filesystem::path& path, const GroundTruthNetwork& net);
GroundTruthNetwork load_network(const std::filesystem::path& path);
void save_roc_csv(const std::filesystem::path& path, const RocCurve& curve);

}  // namespace edgepost
