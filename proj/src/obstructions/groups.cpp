#include "collarext/errors.hpp"
#include "collarext/obstructions.hpp"

#include <cctype>
#include <sstream>

namespace collarext {

GroupModel GroupModel::free(int N) {
  if (N < 1) throw UsageError("free(N): N must be >= 1");
  GroupModel g;
  g.kind_ = GroupKind::free;
  g.param_ = N;
  return g;
}

GroupModel GroupModel::abelian(int m) {
  if (m < 1) throw UsageError("Zm(m): m must be >= 1");
  GroupModel g;
  g.kind_ = GroupKind::abelian;
  g.param_ = m;
  return g;
}

GroupModel GroupModel::heisenberg() {
  GroupModel g;
  g.kind_ = GroupKind::heisenberg;
  return g;
}

GroupModel GroupModel::direct_product(std::vector<GroupModel> factors) {
  if (factors.size() < 2) throw UsageError("product: need at least two factors");
  GroupModel g;
  g.kind_ = GroupKind::direct_product;
  g.factors_ = std::move(factors);
  return g;
}

GroupModel GroupModel::free_product(std::vector<GroupModel> factors) {
  if (factors.size() < 2) throw UsageError("freeprod: need at least two factors");
  GroupModel g;
  g.kind_ = GroupKind::free_product;
  g.factors_ = std::move(factors);
  return g;
}

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw UsageError("group '" + text + "': " + why + " at offset " + std::to_string(pos));
  }
  std::string ident() {
    skip();
    const std::size_t b = pos;
    while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
    if (b == pos) fail("expected a group name");
    return text.substr(b, pos - b);
  }
  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  int integer() {
    skip();
    const std::size_t b = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (b == pos || pos - b > 6) fail("expected a small positive integer");
    return std::stoi(text.substr(b, pos - b));
  }
  GroupModel group() {
    const std::string name = ident();
    if (name == "heisenberg") return GroupModel::heisenberg();
    if (name == "free" || name == "Zm") {
      if (!eat('(')) fail("expected '('");
      const int n = integer();
      if (!eat(')')) fail("expected ')'");
      return name == "free" ? GroupModel::free(n) : GroupModel::abelian(n);
    }
    if (name == "product" || name == "freeprod") {
      if (!eat('(')) fail("expected '('");
      std::vector<GroupModel> fs{group()};
      while (eat(',')) fs.push_back(group());
      if (!eat(')')) fail("expected ')'");
      return name == "product" ? GroupModel::direct_product(std::move(fs))
                               : GroupModel::free_product(std::move(fs));
    }
    fail("unknown group '" + name + "'");
  }
};

using Parts = std::vector<Element>;

Parts split_product(const Element& e, std::size_t count) {
  Parts out;
  std::size_t i = 0;
  for (std::size_t f = 0; f < count; ++f) {
    const auto len = static_cast<std::size_t>(e[i++]);
    out.emplace_back(e.begin() + static_cast<long>(i), e.begin() + static_cast<long>(i + len));
    i += len;
  }
  return out;
}

struct Syllable {
  std::int64_t factor;
  Element value;
};

std::vector<Syllable> split_syllables(const Element& e) {
  std::vector<Syllable> out;
  std::size_t i = 0;
  while (i < e.size()) {
    const std::int64_t f = e[i++];
    const auto len = static_cast<std::size_t>(e[i++]);
    out.push_back({f, Element(e.begin() + static_cast<long>(i), e.begin() + static_cast<long>(i + len))});
    i += len;
  }
  return out;
}

}  // namespace

GroupModel GroupModel::parse(const std::string& text) {
  Parser p{text};
  GroupModel g = p.group();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  return g;
}

std::string GroupModel::name() const {
  std::ostringstream os;
  switch (kind_) {
    case GroupKind::free: os << "free(" << param_ << ")"; break;
    case GroupKind::abelian: os << "Zm(" << param_ << ")"; break;
    case GroupKind::heisenberg: os << "heisenberg"; break;
    case GroupKind::direct_product:
    case GroupKind::free_product:
      os << (kind_ == GroupKind::direct_product ? "product(" : "freeprod(");
      for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "," : "") << factors_[i].name();
      os << ")";
      break;
  }
  return os.str();
}

std::string GroupModel::generators() const {
  std::ostringstream os;
  switch (kind_) {
    case GroupKind::free: os << "free basis x1..x" << param_ << " and inverses"; break;
    case GroupKind::abelian: os << "+-e1..+-e" << param_; break;
    case GroupKind::heisenberg: os << "+-(1,0,0), +-(0,0,1) in (a,b,c) coordinates"; break;
    case GroupKind::direct_product:
    case GroupKind::free_product:
      os << "union of factor generators [";
      for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "; " : "") << factors_[i].generators();
      os << "]";
      break;
  }
  return os.str();
}

int GroupModel::generator_count() const {
  switch (kind_) {
    case GroupKind::free:
    case GroupKind::abelian: return 2 * param_;
    case GroupKind::heisenberg: return 4;
    default: {
      int n = 0;
      for (const auto& f : factors_) n += f.generator_count();
      return n;
    }
  }
}

int GroupModel::inverse_generator(int gen) const {
  if (kind_ == GroupKind::direct_product || kind_ == GroupKind::free_product) {
    int offset = 0;
    for (const auto& f : factors_) {
      const int n = f.generator_count();
      if (gen < offset + n) return offset + f.inverse_generator(gen - offset);
      offset += n;
    }
    throw UsageError("inverse_generator: index out of range");
  }
  return gen ^ 1;
}

Element GroupModel::identity() const {
  switch (kind_) {
    case GroupKind::free:
    case GroupKind::free_product: return {};
    case GroupKind::abelian: return Element(static_cast<std::size_t>(param_), 0);
    case GroupKind::heisenberg: return {0, 0, 0};
    case GroupKind::direct_product: {
      Element e;
      for (const auto& f : factors_) {
        const Element id = f.identity();
        e.push_back(static_cast<std::int64_t>(id.size()));
        e.insert(e.end(), id.begin(), id.end());
      }
      return e;
    }
  }
  return {};
}

Element GroupModel::times_generator(const Element& e, int gen) const {
  if (gen < 0 || gen >= generator_count()) throw UsageError("times_generator: index out of range");
  switch (kind_) {
    case GroupKind::free: {
      const std::int64_t letter = (gen % 2 == 0 ? 1 : -1) * (gen / 2 + 1);
      Element out = e;
      if (!out.empty() && out.back() == -letter) {
        out.pop_back();
      } else {
        out.push_back(letter);
      }
      return out;
    }
    case GroupKind::abelian: {
      Element out = e;
      out[static_cast<std::size_t>(gen / 2)] += gen % 2 == 0 ? 1 : -1;
      return out;
    }
    case GroupKind::heisenberg: {
      const std::int64_t sign = gen % 2 == 0 ? 1 : -1;
      if (gen < 2) return {e[0] + sign, e[1] + e[2] * sign, e[2]};
      return {e[0], e[1], e[2] + sign};
    }
    case GroupKind::direct_product:
    case GroupKind::free_product: break;
  }

  std::size_t f = 0;
  int local = gen;
  while (local >= factors_[f].generator_count()) local -= factors_[f++].generator_count();
  const GroupModel& fac = factors_[f];

  if (kind_ == GroupKind::direct_product) {
    Parts parts = split_product(e, factors_.size());
    parts[f] = fac.times_generator(parts[f], local);
    Element out;
    for (const auto& p : parts) {
      out.push_back(static_cast<std::int64_t>(p.size()));
      out.insert(out.end(), p.begin(), p.end());
    }
    return out;
  }

  std::vector<Syllable> syl = split_syllables(e);
  const auto fi = static_cast<std::int64_t>(f);
  if (!syl.empty() && syl.back().factor == fi) {
    Element v = fac.times_generator(syl.back().value, local);
    if (v == fac.identity()) {
      syl.pop_back();
    } else {
      syl.back().value = std::move(v);
    }
  } else {
    syl.push_back({fi, fac.times_generator(fac.identity(), local)});
  }
  Element out;
  for (const auto& s : syl) {
    out.push_back(s.factor);
    out.push_back(static_cast<std::int64_t>(s.value.size()));
    out.insert(out.end(), s.value.begin(), s.value.end());
  }
  return out;
}

}  // namespace collarext
