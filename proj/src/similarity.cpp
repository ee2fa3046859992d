#include "solmine/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace solmine::sim {

namespace {

bool word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '^';
}

char lower(char c) { return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c; }

// A short argument list glued to a word, as in sol_g(x) or c_g(x,y).
std::size_t attached_args(std::string_view s, std::size_t i) {
  if (i >= s.size() || s[i] != '(') return 0;
  for (std::size_t k = i + 1; k < s.size() && k < i + 16; ++k) {
    char c = lower(s[k]);
    if (c == ')') return k > i + 1 ? k - i + 1 : 0;
    if (!word_char(c) && c != ',') return 0;
  }
  return 0;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char u = static_cast<unsigned char>(text[i]);
    if (u >= 0x80) {
      // One UTF-8 symbol (∈, ⊆, ...) is one token.
      std::size_t len = u >= 0xF0 ? 4 : u >= 0xE0 ? 3 : u >= 0xC0 ? 2 : 1;
      len = std::min(len, text.size() - i);
      out.emplace_back(text.substr(i, len));
      i += len;
      continue;
    }
    char c = lower(text[i]);
    if (!word_char(c) && c != '\\') {
      ++i;
      continue;
    }
    std::string tok(1, c);
    ++i;
    while (i < text.size() && word_char(lower(text[i]))) tok += lower(text[i++]);
    if (tok == "\\") continue;
    if (std::size_t n = attached_args(text, i)) {
      for (std::size_t k = 0; k < n; ++k) tok += lower(text[i + k]);
      i += n;
    }
    out.push_back(std::move(tok));
  }
  return out;
}

void Vectorizer::fit(const std::vector<std::string>& documents) {
  index_.clear();
  std::vector<std::size_t> df;
  for (const auto& doc : documents) {
    auto toks = tokenize(doc);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    for (auto& t : toks) {
      auto [it, fresh] = index_.emplace(std::move(t), df.size());
      if (fresh) df.push_back(0);
      ++df[it->second];
    }
  }
  documents_ = documents.size();
  idf_.resize(df.size());
  for (std::size_t k = 0; k < df.size(); ++k)
    idf_[k] = std::log((1.0 + static_cast<double>(documents_)) / (1.0 + static_cast<double>(df[k]))) + 1.0;
}

SparseVector Vectorizer::transform(std::string_view text) const {
  std::map<std::size_t, double> tf;
  for (const auto& t : tokenize(text)) {
    auto it = index_.find(t);
    if (it != index_.end()) tf[it->second] += 1.0;
  }
  SparseVector v;
  double norm = 0;
  for (auto [k, count] : tf) {
    double w = count * idf_[k];
    v.emplace_back(k, w);
    norm += w * w;
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (auto& e : v) e.second /= norm;
  }
  return v;
}

double cosine(const SparseVector& a, const SparseVector& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& e : a) na += e.second * e.second;
  for (const auto& e : b) nb += e.second * e.second;
  if (na == 0 || nb == 0) return 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) ++i;
    else if (b[j].first < a[i].first) ++j;
    else dot += a[i++].second * b[j++].second;
  }
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, 0.0, 1.0);
}

SimilarityMatrix cosine_matrix(const std::vector<std::string>& a, const std::vector<std::string>& b,
                               std::vector<std::string> row_labels, std::vector<std::string> col_labels) {
  std::vector<std::string> all(a);
  all.insert(all.end(), b.begin(), b.end());
  Vectorizer v;
  v.fit(all);
  std::vector<SparseVector> va, vb;
  for (const auto& d : a) va.push_back(v.transform(d));
  for (const auto& d : b) vb.push_back(v.transform(d));

  SimilarityMatrix m;
  m.row_labels = std::move(row_labels);
  m.col_labels = std::move(col_labels);
  m.row_labels.resize(a.size());
  m.col_labels.resize(b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (m.row_labels[i].empty()) m.row_labels[i] = std::to_string(i);
  for (std::size_t j = 0; j < b.size(); ++j)
    if (m.col_labels[j].empty()) m.col_labels[j] = std::to_string(j);
  m.values.assign(a.size() * b.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m.at(i, j) = cosine(va[i], vb[j]);
  return m;
}

SimilarityMatrix self_matrix(const std::vector<std::string>& docs, std::vector<std::string> labels) {
  Vectorizer v;
  v.fit(docs);
  std::vector<SparseVector> vs;
  for (const auto& d : docs) vs.push_back(v.transform(d));
  SimilarityMatrix m;
  labels.resize(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i)
    if (labels[i].empty()) labels[i] = std::to_string(i);
  m.row_labels = labels;
  m.col_labels = std::move(labels);
  m.values.assign(docs.size() * docs.size(), 0.0);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    m.at(i, i) = vs[i].empty() ? 0.0 : 1.0;
    for (std::size_t j = 0; j < i; ++j) m.at(i, j) = m.at(j, i) = cosine(vs[i], vs[j]);
  }
  return m;
}

Stats similarity_stats(const SimilarityMatrix& m, bool exclude_diagonal) {
  std::vector<double> xs;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!(exclude_diagonal && i == j)) xs.push_back(m.at(i, j));
  if (xs.empty())
    throw std::invalid_argument(exclude_diagonal
                                    ? "no off-diagonal entries: at least two documents are needed"
                                    : "the similarity matrix is empty");
  std::sort(xs.begin(), xs.end());
  Stats s;
  s.count = xs.size();
  s.min = xs.front();
  s.max = xs.back();
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  std::size_t h = xs.size() / 2;
  s.median = xs.size() % 2 ? xs[h] : (xs[h - 1] + xs[h]) / 2.0;
  return s;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string number(double v, int significant) {
  if (v == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

// One CSV record; handles quoted fields spanning lines.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_csv(const SimilarityMatrix& m, std::ostream& out, int significant) {
  out << "\"\"";
  for (const auto& c : m.col_labels) out << ',' << quote(c);
  out << "\r\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << quote(m.row_labels[i]);
    for (std::size_t j = 0; j < m.cols(); ++j) out << ',' << number(m.at(i, j), significant);
    out << "\r\n";
  }
}

SimilarityMatrix read_csv(std::istream& in) {
  SimilarityMatrix m;
  std::vector<std::string> f;
  if (!read_record(in, f)) throw std::runtime_error("empty similarity CSV");
  m.col_labels.assign(f.begin() + 1, f.end());
  std::size_t line = 1;
  while (read_record(in, f)) {
    ++line;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != m.cols() + 1)
      throw std::runtime_error("similarity CSV line " + std::to_string(line) + ": expected " +
                               std::to_string(m.cols() + 1) + " fields");
    m.row_labels.push_back(f[0]);
    for (std::size_t j = 1; j < f.size(); ++j) m.values.push_back(std::stod(f[j]));
  }
  return m;
}

void write_svg(const SimilarityMatrix& m, std::ostream& out) {
  const int cell = 14, margin = 80;
  const std::size_t w = margin + cell * m.cols() + 10, h = margin + cell * m.rows() + 10;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"monospace\" font-size=\"9\">\n";
  for (std::size_t j = 0; j < m.cols(); ++j)
    out << "<text transform=\"translate(" << margin + cell * j + cell - 3 << "," << margin - 4
        << ") rotate(-90)\">" << xml_escape(m.col_labels[j]) << "</text>\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << "<text x=\"2\" y=\"" << margin + cell * i + cell - 3 << "\">" << xml_escape(m.row_labels[i])
        << "</text>\n";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      int g = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(m.at(i, j), 0.0, 1.0))));
      out << "<rect x=\"" << margin + cell * j << "\" y=\"" << margin + cell * i << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"><title>"
          << number(m.at(i, j), 6) << "</title></rect>\n";
    }
  }
  out << "</svg>\n";
}

void export_heatmap(const SimilarityMatrix& m, const std::filesystem::path& path, bool svg, int significant) {
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    write_csv(m, f, significant);
    if (!f) throw std::runtime_error("write failed: " + path.string());
  }
  if (svg) {
    auto p = path;
    p.replace_extension(".svg");
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    write_svg(m, f);
  }
}

}  // namespace solmine::sim
