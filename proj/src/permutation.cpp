#include "annc/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace annc {

std::vector<int> range(int lo, int hi) {
  std::vector<int> r;
  for (int i = lo; i <= hi; ++i) r.push_back(i);
  return r;
}

Permutation::Permutation(std::vector<int> ground) : ground_(std::move(ground)) {
  std::sort(ground_.begin(), ground_.end());
  image_ = ground_;
  setup();
}

Permutation Permutation::trusted(std::vector<int> ground, std::vector<int> image) {
  Permutation r;
  r.ground_ = std::move(ground);
  r.image_ = std::move(image);
  r.setup();
  return r;
}

Permutation::Permutation(std::vector<int> ground, std::vector<int> image)
    : ground_(std::move(ground)), image_(std::move(image)) {
  if (ground_.size() != image_.size()) throw std::invalid_argument("ground/image size mismatch");
  if (!std::is_sorted(ground_.begin(), ground_.end())) {
    std::vector<std::size_t> order(ground_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ground_[a] < ground_[b]; });
    std::vector<int> g, im;
    for (auto i : order) g.push_back(ground_[i]), im.push_back(image_[i]);
    ground_ = std::move(g);
    image_ = std::move(im);
  }
  if (std::adjacent_find(ground_.begin(), ground_.end()) != ground_.end())
    throw std::invalid_argument("repeated ground element");
  setup();
  std::vector<int> s = image_;
  std::sort(s.begin(), s.end());
  if (s != ground_) throw std::invalid_argument("map is not a bijection on its ground set");
}

void Permutation::setup() {
  contiguous_ = ground_.empty() || ground_.back() - ground_.front() + 1 == static_cast<int>(ground_.size());
  lo_ = ground_.empty() ? 0 : ground_.front();
}

std::size_t Permutation::index(int x) const {
  if (contiguous_) {
    auto i = static_cast<std::size_t>(x - lo_);
    if (x < lo_ || i >= ground_.size()) throw std::out_of_range("element not in ground set: " + std::to_string(x));
    return i;
  }
  auto it = std::lower_bound(ground_.begin(), ground_.end(), x);
  if (it == ground_.end() || *it != x) throw std::out_of_range("element not in ground set: " + std::to_string(x));
  return static_cast<std::size_t>(it - ground_.begin());
}

bool Permutation::contains(int x) const {
  return std::binary_search(ground_.begin(), ground_.end(), x);
}

Permutation Permutation::identity(int n) { return Permutation(range(1, n)); }

Permutation Permutation::from_cycles(const std::vector<std::vector<int>>& cycles, std::vector<int> ground) {
  std::map<int, int> m;
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (m.count(c[i])) throw std::invalid_argument("element repeated in cycles: " + std::to_string(c[i]));
      m[c[i]] = c[(i + 1) % c.size()];
    }
  if (ground.empty()) {
    for (auto& [k, v] : m) ground.push_back(k);
  } else {
    std::sort(ground.begin(), ground.end());
  }
  std::vector<int> image;
  for (int x : ground) {
    auto it = m.find(x);
    image.push_back(it == m.end() ? x : it->second);
  }
  if (m.size() > ground.size()) throw std::invalid_argument("cycle entries outside ground set");
  for (auto& [k, v] : m)
    if (!std::binary_search(ground.begin(), ground.end(), k))
      throw std::invalid_argument("cycle entry outside ground set: " + std::to_string(k));
  return Permutation(std::move(ground), std::move(image));
}

Permutation Permutation::parse(std::string_view text, std::vector<int> ground) {
  std::vector<std::vector<int>> cycles;
  std::size_t i = 0;
  auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip();
  while (i < text.size()) {
    if (text[i] != '(') throw std::invalid_argument("expected '(' in cycle notation");
    ++i;
    std::vector<int> cyc;
    for (;;) {
      skip();
      std::size_t j = i;
      if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) throw std::invalid_argument("expected integer in cycle notation");
      cyc.push_back(std::stoi(std::string(text.substr(i, j - i))));
      i = j;
      skip();
      if (i < text.size() && text[i] == ',') { ++i; continue; }
      if (i < text.size() && text[i] == ')') { ++i; break; }
      throw std::invalid_argument("unterminated cycle");
    }
    cycles.push_back(std::move(cyc));
    skip();
  }
  return from_cycles(cycles, std::move(ground));
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(ground_.size(), 0);
  for (std::size_t s = 0; s < ground_.size(); ++s) {
    if (seen[s]) continue;
    std::vector<int> c;
    std::size_t x = s;
    while (!seen[x]) {
      seen[x] = 1;
      c.push_back(ground_[x]);
      x = index(image_[x]);
    }
    out.push_back(std::move(c));
  }
  return out;  // ground sorted, so each cycle already starts at its minimum
}

int Permutation::num_cycles() const {
  int n = 0;
  std::vector<char> seen(ground_.size(), 0);
  for (std::size_t s = 0; s < ground_.size(); ++s) {
    if (seen[s]) continue;
    ++n;
    for (std::size_t x = s; !seen[x]; x = index(image_[x])) seen[x] = 1;
  }
  return n;
}

Permutation Permutation::inverse() const {
  Permutation r = *this;
  for (std::size_t i = 0; i < ground_.size(); ++i) r.image_[index(image_[i])] = ground_[i];
  return r;
}

bool Permutation::is_identity() const { return image_ == ground_; }

std::string Permutation::str() const {
  std::string s;
  for (const auto& c : cycles()) {
    s += '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(c[i]);
    }
    s += ')';
  }
  return s;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.ground() != b.ground()) throw std::invalid_argument("compose: mismatched ground sets");
  std::vector<int> image(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) image[i] = a(b.images()[i]);
  return Permutation::trusted(b.ground(), std::move(image));
}

Permutation induced(const Permutation& pi, const std::vector<int>& J) {
  std::vector<int> g = J;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  for (int x : g)
    if (!pi.contains(x)) throw std::invalid_argument("induced: J not a subset of the ground set");
  std::vector<int> image;
  image.reserve(g.size());
  for (int x : g) {
    int y = pi(x);
    while (!std::binary_search(g.begin(), g.end(), y)) y = pi(y);
    image.push_back(y);
  }
  return Permutation::trusted(std::move(g), std::move(image));
}

Permutation extend(const Permutation& pi, const std::vector<int>& ground) {
  std::vector<int> g = ground;
  std::sort(g.begin(), g.end());
  std::vector<int> image;
  for (int x : g) image.push_back(pi.contains(x) ? pi(x) : x);
  return Permutation(std::move(g), std::move(image));
}

Permutation tau_n(int n) {
  std::vector<int> img;
  for (int i = 1; i <= n; ++i) img.push_back(i == n ? 1 : i + 1);
  return Permutation(range(1, n), img);
}

Permutation tau_pq(int p, int q) {
  std::vector<int> img;
  for (int i = 1; i <= p; ++i) img.push_back(i == p ? 1 : i + 1);
  for (int i = p + 1; i <= p + q; ++i) img.push_back(i == p + q ? p + 1 : i + 1);
  return Permutation(range(1, p + q), img);
}

std::size_t PermutationHash::operator()(const Permutation& p) const {
  std::size_t h = 1469598103934665603ull;
  for (int x : p.ground()) h = (h ^ static_cast<std::size_t>(x + 1000)) * 1099511628211ull;
  for (int x : p.images()) h = (h ^ static_cast<std::size_t>(x + 7919)) * 1099511628211ull;
  return h;
}

}  // namespace annc
