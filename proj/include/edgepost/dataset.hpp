#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace edgepost {

/// Complete categorical data: m records over n attributes, stored by column.
class Dataset {
 public:
  using value_type = std::uint32_t;

  Dataset() = default;

  /// Builds from per-attribute columns. Throws PreconditionError on unequal
  /// column lengths, a zero arity, or a value outside [0, arity).
  Dataset(std::vector<std::string> names, std::vector<unsigned> arities,
          std::vector<std::vector<value_type>> columns);

  /// Row-major convenience constructor; `rows[t][i]` is attribute i of record t.
  static Dataset from_rows(std::vector<std::string> names, std::vector<unsigned> arities,
                           const std::vector<std::vector<value_type>>& rows);

  /// An m = 0 dataset with default names x0..x{n-1}.
  static Dataset empty(unsigned n, unsigned arity = 2);

  unsigned n() const noexcept { return static_cast<unsigned>(names_.size()); }
  std::size_t m() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<unsigned>& arities() const noexcept { return arities_; }
  unsigned arity(unsigned i) const { return arities_.at(i); }
  std::span<const value_type> column(unsigned i) const { return columns_.at(i); }
  value_type at(std::size_t record, unsigned i) const { return columns_.at(i).at(record); }

  /// The first `count` records, arities unchanged.
  Dataset prefix(std::size_t count) const;

 private:
  std::vector<std::string> names_;
  std::vector<unsigned> arities_;
  std::vector<std::vector<value_type>> columns_;
};

/// Parses the CSV dataset format: a header of attribute names, then one
/// comma-separated row of nonnegative integers per record. Lines starting with
/// '#' and blank lines are skipped. Arities default to column max + 1 (1 for
/// an empty column) unless `arities` is given. Throws ParseError.
Dataset parse_dataset(std::istream& in, const std::optional<std::vector<unsigned>>& arities = std::nullopt);

/// parse_dataset on a file; IoError if it cannot be opened.
Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<std::vector<unsigned>>& arities = std::nullopt);

void write_dataset(std::ostream& out, const Dataset& data);
void save_dataset(const std::filesystem::path& path, const Dataset& data);

}  // namespace edgepost
