#include "edgepost/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string_view>

#include "edgepost/errors.hpp"

namespace edgepost {

Dataset::Dataset(std::vector<std::string> names, std::vector<unsigned> arities,
                 std::vector<std::vector<value_type>> columns)
    : names_(std::move(names)), arities_(std::move(arities)), columns_(std::move(columns)) {
  if (arities_.size() != names_.size() || columns_.size() != names_.size()) {
    throw PreconditionError("names, arities and columns must have one entry per attribute");
  }
  for (unsigned i = 0; i < names_.size(); ++i) {
    if (arities_[i] == 0) throw PreconditionError("attribute '" + names_[i] + "' has arity 0");
    if (columns_[i].size() != columns_.front().size()) {
      throw PreconditionError("column '" + names_[i] + "' has a different record count");
    }
    for (value_type v : columns_[i]) {
      if (v >= arities_[i]) {
        throw PreconditionError("value " + std::to_string(v) + " of attribute '" + names_[i] +
                                "' is outside [0, " + std::to_string(arities_[i]) + ")");
      }
    }
  }
}

Dataset Dataset::from_rows(std::vector<std::string> names, std::vector<unsigned> arities,
                           const std::vector<std::vector<value_type>>& rows) {
  std::vector<std::vector<value_type>> columns(names.size());
  for (auto& c : columns) c.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != names.size()) throw PreconditionError("row width differs from attribute count");
    for (std::size_t i = 0; i < row.size(); ++i) columns[i].push_back(row[i]);
  }
  return Dataset(std::move(names), std::move(arities), std::move(columns));
}

Dataset Dataset::empty(unsigned n, unsigned arity) {
  std::vector<std::string> names;
  for (unsigned i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return Dataset(std::move(names), std::vector<unsigned>(n, arity),
                 std::vector<std::vector<value_type>>(n));
}

Dataset Dataset::prefix(std::size_t count) const {
  count = std::min(count, m());
  std::vector<std::vector<value_type>> columns;
  columns.reserve(columns_.size());
  for (const auto& c : columns_) columns.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(count));
  return Dataset(names_, arities_, std::move(columns));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::optional<std::vector<unsigned>>& arities) {
  using Kind = ParseError::Kind;
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> names;
  std::vector<std::vector<Dataset::value_type>> columns;
  bool have_header = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);

    if (!have_header) {
      std::set<std::string_view> seen;
      for (auto cell : cells) {
        if (cell.empty()) throw ParseError(Kind::malformed_header, line_no, "empty attribute name");
        if (!seen.insert(cell).second) {
          throw ParseError(Kind::malformed_header, line_no, "duplicate attribute name '" + std::string(cell) + "'");
        }
        names.emplace_back(cell);
      }
      columns.resize(names.size());
      have_header = true;
      continue;
    }

    if (cells.size() != names.size()) {
      throw ParseError(Kind::ragged_row, line_no,
                       "expected " + std::to_string(names.size()) + " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string_view cell = cells[i];
      if (cell.empty()) throw ParseError(Kind::malformed_row, line_no, "empty cell in column " + std::to_string(i));
      if (cell.front() == '-') {
        long long probe = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), probe);
        if (ec == std::errc() && ptr == cell.data() + cell.size()) {
          throw ParseError(Kind::negative_value, line_no, "negative value " + std::string(cell));
        }
        throw ParseError(Kind::non_integer, line_no, "'" + std::string(cell) + "' is not an integer");
      }
      Dataset::value_type value = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(Kind::non_integer, line_no, "'" + std::string(cell) + "' is not an integer");
      }
      if (arities && i < arities->size() && value >= (*arities)[i]) {
        throw ParseError(Kind::value_exceeds_arity, line_no,
                         "value " + std::to_string(value) + " exceeds arity " + std::to_string((*arities)[i]) +
                             " of '" + names[i] + "'");
      }
      columns[i].push_back(value);
    }
  }
  if (!have_header) throw ParseError(Kind::missing_header, line_no, "no header line");

  std::vector<unsigned> resolved;
  if (arities) {
    if (arities->size() != names.size()) {
      throw ParseError(Kind::malformed_header, 1,
                       std::to_string(arities->size()) + " arities given for " + std::to_string(names.size()) +
                           " attributes");
    }
    resolved = *arities;
    if (std::find(resolved.begin(), resolved.end(), 0u) != resolved.end()) {
      throw ParseError(Kind::malformed_header, 1, "arity override must be positive");
    }
  } else {
    for (const auto& c : columns) {
      resolved.push_back(c.empty() ? 1u : *std::max_element(c.begin(), c.end()) + 1);
    }
  }
  return Dataset(std::move(names), std::move(resolved), std::move(columns));
}

Dataset load_dataset(const std::filesystem::path& path, const std::optional<std::vector<unsigned>>& arities) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  return parse_dataset(in, arities);
}

void write_dataset(std::ostream& out, const Dataset& data) {
  for (unsigned i = 0; i < data.n(); ++i) out << (i ? "," : "") << data.names()[i];
  out << '\n';
  for (std::size_t t = 0; t < data.m(); ++t) {
    for (unsigned i = 0; i < data.n(); ++i) out << (i ? "," : "") << data.at(t, i);
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset '" + path.string() + "'");
  write_dataset(out, data);
  if (!out) throw IoError("failed writing dataset '" + path.string() + "'");
}

}  // namespace edgepost
