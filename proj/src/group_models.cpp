#include "erglab/percolation.hpp"

#include "erglab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace erglab {

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t v : e) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

namespace {

std::int64_t parse_int64(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ValidationError("bad integer '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t depth = 0, start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '<' || s[i] == '(' || s[i] == '[') ++depth;
    if (s[i] == '>' || s[i] == ')' || s[i] == ']') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

class ZdModel final : public GroupModel {
 public:
  explicit ZdModel(std::size_t d) : d_(d) {
    if (d == 0) throw ValidationError("Z^d needs d >= 1");
  }
  std::string name() const override { return "Z" + std::to_string(d_); }
  Element identity() const override { return Element(d_, 0); }
  Element multiply(const Element& a, const Element& b) const override {
    Element c(d_);
    for (std::size_t i = 0; i < d_; ++i) c[i] = a[i] + b[i];
    return c;
  }
  Element inverse(const Element& a) const override {
    Element c(d_);
    for (std::size_t i = 0; i < d_; ++i) c[i] = -a[i];
    return c;
  }
  std::vector<Element> standard_generators() const override {
    std::vector<Element> q;
    for (std::size_t i = 0; i < d_; ++i)
      for (int sign : {1, -1}) {
        Element e(d_, 0);
        e[i] = sign;
        q.push_back(e);
      }
    return q;
  }
  std::optional<std::size_t> standard_length(const Element& a) const override {
    std::size_t l = 0;
    for (auto v : a) l += static_cast<std::size_t>(v < 0 ? -v : v);
    return l;
  }
  std::string format(const Element& a) const override {
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ")";
  }
  Element parse(std::string_view text) const override {
    if (!text.empty() && text.front() == '(' && text.back() == ')') text = text.substr(1, text.size() - 2);
    auto parts = split(text, ',');
    if (parts.size() != d_) throw ValidationError("expected " + std::to_string(d_) + " coordinates");
    Element e;
    for (auto p : parts) e.push_back(parse_int64(p));
    return e;
  }

 private:
  std::size_t d_;
};

class FreeModel final : public GroupModel {
 public:
  explicit FreeModel(std::size_t k) : k_(k) {
    if (k == 0 || k > 26) throw ValidationError("free group rank must be in 1..26");
  }
  std::string name() const override { return "F" + std::to_string(k_); }
  Element identity() const override { return {}; }
  Element multiply(const Element& a, const Element& b) const override {
    Element c = a;
    for (auto l : b) {
      if (!c.empty() && c.back() == -l) c.pop_back();
      else c.push_back(l);
    }
    return c;
  }
  Element inverse(const Element& a) const override {
    Element c(a.rbegin(), a.rend());
    for (auto& l : c) l = -l;
    return c;
  }
  std::vector<Element> standard_generators() const override {
    std::vector<Element> q;
    for (std::size_t i = 1; i <= k_; ++i) {
      q.push_back({static_cast<std::int64_t>(i)});
      q.push_back({-static_cast<std::int64_t>(i)});
    }
    return q;
  }
  std::optional<std::size_t> standard_length(const Element& a) const override { return a.size(); }
  std::string format(const Element& a) const override {
    if (a.empty()) return "e";
    std::string s;
    for (auto l : a) s += l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1);
    return s;
  }
  Element parse(std::string_view text) const override {
    if (text == "e") return {};
    Element e;
    for (char ch : text) {
      std::int64_t l;
      if (ch >= 'a' && ch < 'a' + static_cast<int>(k_)) l = ch - 'a' + 1;
      else if (ch >= 'A' && ch < 'A' + static_cast<int>(k_)) l = -(ch - 'A' + 1);
      else throw ValidationError("bad free-group letter '" + std::string(1, ch) + "'");
      e = multiply(e, Element{l});
    }
    return e;
  }

 private:
  std::size_t k_;
};

class PermGroupModel final : public GroupModel {
 public:
  PermGroupModel(std::size_t degree, std::vector<Perm> gens) : degree_(degree) {
    for (auto& g : gens) {
      if (g.size() != degree) throw ValidationError("generator degree mismatch");
      add(to_element(g));
      add(to_element(g.inverse()));
    }
  }
  std::string name() const override { return "Sym" + std::to_string(degree_); }
  Element identity() const override {
    Element e(degree_);
    for (std::size_t i = 0; i < degree_; ++i) e[i] = static_cast<std::int64_t>(i);
    return e;
  }
  Element multiply(const Element& a, const Element& b) const override {
    Element c(degree_);
    for (std::size_t i = 0; i < degree_; ++i) c[i] = a[static_cast<std::size_t>(b[i])];
    return c;
  }
  Element inverse(const Element& a) const override {
    Element c(degree_);
    for (std::size_t i = 0; i < degree_; ++i) c[static_cast<std::size_t>(a[i])] = static_cast<std::int64_t>(i);
    return c;
  }
  std::vector<Element> standard_generators() const override { return gens_; }
  std::string format(const Element& a) const override {
    std::string s = "[";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + "]";
  }
  Element parse(std::string_view text) const override {
    if (!text.empty() && text.front() == '[' && text.back() == ']') text = text.substr(1, text.size() - 2);
    std::vector<Point> img;
    for (auto p : split(text, ',')) img.push_back(static_cast<Point>(parse_int64(p)));
    if (img.size() != degree_) throw ValidationError("permutation of wrong degree");
    return to_element(Perm(img));
  }

 private:
  static Element to_element(const Perm& p) { return Element(p.images().begin(), p.images().end()); }
  void add(Element e) {
    if (std::find(gens_.begin(), gens_.end(), e) == gens_.end()) gens_.push_back(std::move(e));
  }
  std::size_t degree_;
  std::vector<Element> gens_;
};

class ProductModel final : public GroupModel {
 public:
  explicit ProductModel(std::vector<std::shared_ptr<const GroupModel>> f) : f_(std::move(f)) {
    if (f_.size() < 2) throw ValidationError("a product needs at least two factors");
  }
  std::string name() const override {
    std::string s;
    for (std::size_t i = 0; i < f_.size(); ++i) s += (i ? "x" : "") + f_[i]->name();
    return s;
  }
  Element identity() const override {
    std::vector<Element> parts;
    for (const auto& f : f_) parts.push_back(f->identity());
    return join(parts);
  }
  Element multiply(const Element& a, const Element& b) const override {
    auto pa = parts(a), pb = parts(b);
    for (std::size_t i = 0; i < f_.size(); ++i) pa[i] = f_[i]->multiply(pa[i], pb[i]);
    return join(pa);
  }
  Element inverse(const Element& a) const override {
    auto pa = parts(a);
    for (std::size_t i = 0; i < f_.size(); ++i) pa[i] = f_[i]->inverse(pa[i]);
    return join(pa);
  }
  std::vector<Element> standard_generators() const override {
    std::vector<Element> q;
    for (std::size_t i = 0; i < f_.size(); ++i)
      for (const auto& g : f_[i]->standard_generators()) {
        std::vector<Element> ps;
        for (std::size_t j = 0; j < f_.size(); ++j) ps.push_back(j == i ? g : f_[j]->identity());
        q.push_back(join(ps));
      }
    return q;
  }
  std::optional<std::size_t> standard_length(const Element& a) const override {
    auto pa = parts(a);
    std::size_t l = 0;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      auto li = f_[i]->standard_length(pa[i]);
      if (!li) return std::nullopt;
      l += *li;
    }
    return l;
  }
  std::string format(const Element& a) const override {
    auto pa = parts(a);
    std::string s = "<";
    for (std::size_t i = 0; i < f_.size(); ++i) s += (i ? "|" : "") + f_[i]->format(pa[i]);
    return s + ">";
  }
  Element parse(std::string_view text) const override {
    if (text.size() < 2 || text.front() != '<' || text.back() != '>') throw ValidationError("product element must be <..|..>");
    auto items = split(text.substr(1, text.size() - 2), '|');
    if (items.size() != f_.size()) throw ValidationError("wrong number of product factors");
    std::vector<Element> ps;
    for (std::size_t i = 0; i < f_.size(); ++i) ps.push_back(f_[i]->parse(items[i]));
    return join(ps);
  }

 private:
  static Element join(const std::vector<Element>& parts) {
    Element e;
    for (const auto& p : parts) {
      e.push_back(static_cast<std::int64_t>(p.size()));
      e.insert(e.end(), p.begin(), p.end());
    }
    return e;
  }
  std::vector<Element> parts(const Element& e) const {
    std::vector<Element> out;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      if (pos >= e.size()) throw ValidationError("malformed product element");
      auto len = static_cast<std::size_t>(e[pos++]);
      if (pos + len > e.size()) throw ValidationError("malformed product element");
      out.emplace_back(e.begin() + static_cast<std::ptrdiff_t>(pos), e.begin() + static_cast<std::ptrdiff_t>(pos + len));
      pos += len;
    }
    return out;
  }
  std::vector<std::shared_ptr<const GroupModel>> f_;
};

}  // namespace

std::shared_ptr<const GroupModel> make_zd(std::size_t d) { return std::make_shared<ZdModel>(d); }
std::shared_ptr<const GroupModel> make_free(std::size_t k) { return std::make_shared<FreeModel>(k); }
std::shared_ptr<const GroupModel> make_perm_group(std::size_t degree, std::vector<Perm> generators) {
  return std::make_shared<PermGroupModel>(degree, std::move(generators));
}
std::shared_ptr<const GroupModel> make_product(std::vector<std::shared_ptr<const GroupModel>> factors) {
  return std::make_shared<ProductModel>(std::move(factors));
}

std::shared_ptr<const GroupModel> model_from_name(std::string_view name) {
  auto parts = split(name, 'x');
  if (parts.size() > 1) {
    std::vector<std::shared_ptr<const GroupModel>> f;
    for (auto p : parts) f.push_back(model_from_name(p));
    return make_product(std::move(f));
  }
  std::string_view rest = name.size() > 1 ? name.substr(1) : std::string_view{};
  if (!rest.empty() && rest.front() == '^') rest.remove_prefix(1);
  if (rest.empty() || (name.front() != 'Z' && name.front() != 'F'))
    throw ValidationError("unknown group model '" + std::string(name) + "'");
  auto n = static_cast<std::size_t>(parse_int64(rest));
  return name.front() == 'Z' ? make_zd(n) : make_free(n);
}

}  // namespace erglab
