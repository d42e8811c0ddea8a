// Blank-node canonical labeling by colour refinement with exhaustive
// individualization of tied classes.

#include "voidext/rdf.hpp"

#include <algorithm>
#include <optional>

namespace voidext {

namespace {

struct Labeling {
  std::string form;
  std::vector<std::size_t> colors;
};

class Canonicalizer {
public:
  explicit Canonicalizer(const Graph& g) {
    for (const auto& t : g) {
      for (const Term* term : {&t.subject, &t.object}) {
        if (term->is_blank() && !index_.contains(term->value())) {
          index_.emplace(term->value(), labels_.size());
          labels_.push_back(term->value());
        }
      }
    }
    incident_.resize(labels_.size());
    for (const auto& t : g) {
      if (t.subject.is_blank() || t.object.is_blank()) {
        triples_.push_back(t);
        if (t.subject.is_blank()) incident_[index_.at(t.subject.value())].push_back(triples_.size() - 1);
        if (t.object.is_blank() && t.object != t.subject)
          incident_[index_.at(t.object.value())].push_back(triples_.size() - 1);
      } else {
        ground_.push_back(t.subject.to_string() + " " + t.predicate.to_string() + " " + t.object.to_string() + " .");
      }
    }
  }

  Labeling run() {
    std::vector<std::size_t> colors(labels_.size(), 0);
    return search(std::move(colors));
  }

  const std::vector<std::string>& labels() const { return labels_; }

private:
  std::string describe(const Term& t, const std::vector<std::size_t>& colors) const {
    if (t.is_blank()) return "#" + std::to_string(colors[index_.at(t.value())]);
    return t.to_string();
  }

  std::vector<std::size_t> refine(std::vector<std::size_t> colors) const {
    std::size_t classes = count_classes(colors);
    for (;;) {
      std::vector<std::string> sigs(labels_.size());
      for (std::size_t b = 0; b < labels_.size(); ++b) {
        std::vector<std::string> parts;
        for (auto ti : incident_[b]) {
          const auto& t = triples_[ti];
          const bool is_subject = t.subject.is_blank() && index_.at(t.subject.value()) == b;
          const bool is_object = t.object.is_blank() && index_.at(t.object.value()) == b;
          if (is_subject && is_object)
            parts.push_back("L|" + t.predicate.to_string());
          else if (is_subject)
            parts.push_back("S|" + t.predicate.to_string() + "|" + describe(t.object, colors));
          else
            parts.push_back("O|" + t.predicate.to_string() + "|" + describe(t.subject, colors));
        }
        std::sort(parts.begin(), parts.end());
        std::string sig = std::to_string(colors[b]);
        for (const auto& p : parts) sig += "\x1f" + p;
        sigs[b] = std::move(sig);
      }
      std::vector<std::string> distinct = sigs;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (std::size_t b = 0; b < labels_.size(); ++b)
        colors[b] = static_cast<std::size_t>(
            std::lower_bound(distinct.begin(), distinct.end(), sigs[b]) - distinct.begin());
      if (distinct.size() == classes) return colors;
      classes = distinct.size();
    }
  }

  static std::size_t count_classes(const std::vector<std::size_t>& colors) {
    std::vector<std::size_t> c = colors;
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  }

  std::string render(const std::vector<std::size_t>& colors) const {
    std::vector<std::string> lines = ground_;
    auto name = [&](const Term& t) {
      return t.is_blank() ? "_:c" + std::to_string(colors[index_.at(t.value())]) : t.to_string();
    };
    for (const auto& t : triples_)
      lines.push_back(name(t.subject) + " " + t.predicate.to_string() + " " + name(t.object) + " .");
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
  }

  Labeling search(std::vector<std::size_t> colors) const {
    colors = refine(std::move(colors));
    // Smallest tied colour class, if any.
    std::map<std::size_t, std::vector<std::size_t>> classes;
    for (std::size_t b = 0; b < colors.size(); ++b) classes[colors[b]].push_back(b);
    const std::vector<std::size_t>* tied = nullptr;
    for (const auto& [color, members] : classes)
      if (members.size() > 1 && (tied == nullptr || members.size() < tied->size())) tied = &members;
    if (tied == nullptr) return {render(colors), colors};

    std::optional<Labeling> best;
    for (auto member : *tied) {
      std::vector<std::size_t> next(colors.size());
      for (std::size_t b = 0; b < colors.size(); ++b) next[b] = 2 * colors[b];
      next[member] += 1;
      auto candidate = search(std::move(next));
      if (!best || candidate.form < best->form) best = std::move(candidate);
    }
    return *best;
  }

  std::vector<std::string> labels_;
  std::map<std::string, std::size_t> index_;
  std::vector<Triple> triples_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::string> ground_;
};

} // namespace

std::string canonical_form(const Graph& graph) { return Canonicalizer(graph).run().form; }

bool isomorphic(const Graph& a, const Graph& b) {
  return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

std::map<std::string, std::size_t> canonical_blank_labels(const Graph& graph) {
  Canonicalizer c(graph);
  const auto result = c.run();
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < c.labels().size(); ++i) out.emplace(c.labels()[i], result.colors[i]);
  return out;
}

} // namespace voidext
