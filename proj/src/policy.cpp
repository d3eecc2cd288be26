#include "agnn/policy.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "agnn/errors.hpp"

namespace agnn {

namespace {

constexpr std::string_view kModelMagic = "agnn-model";
constexpr int kModelVersion = 1;

Eigen::Index centre(std::size_t taps) { return static_cast<Eigen::Index>((taps - 1) / 2); }

void require_shape(const LayerCache& cache, const PolicyParameters& params) {
  const PolicyShape& s = params.shape();
  if (!(cache.shape == s) || cache.pre.size() != s.layers || cache.post.size() != s.layers + 1)
    throw InvalidState("layer cache does not belong to these policy parameters");
}

}  // namespace

std::size_t PolicyShape::num_params() const {
  return layers * taps + hops + (bias ? layers + 1 : 0);
}

std::string_view to_string(InitScheme scheme) {
  switch (scheme) {
    case InitScheme::kUniformFanIn: return "uniform_fan_in";
    case InitScheme::kUniformHe: return "uniform_he";
    case InitScheme::kDelta: return "delta";
  }
  return "unknown";
}

InitScheme init_scheme_from_string(std::string_view name) {
  if (name == "uniform_fan_in") return InitScheme::kUniformFanIn;
  if (name == "uniform_he") return InitScheme::kUniformHe;
  if (name == "delta") return InitScheme::kDelta;
  throw InvalidArgument("unknown init scheme '" + std::string(name) + "'");
}

PolicyParameters::PolicyParameters(const PolicyShape& shape)
    : shape_(shape), theta_(Vector::Zero(static_cast<Eigen::Index>(shape.num_params()))) {
  if (shape.layers == 0 || shape.taps == 0 || shape.hops == 0)
    throw InvalidArgument("policy shape needs layers, taps and hops >= 1");
}

PolicyParameters PolicyParameters::initialize(const PolicyShape& shape, InitScheme scheme, Rng& rng) {
  PolicyParameters p(shape);
  auto bound = [scheme](std::size_t fan_in) {
    const double f = static_cast<double>(fan_in);
    return scheme == InitScheme::kUniformHe ? std::sqrt(6.0 / f) : 1.0 / std::sqrt(f);
  };
  auto draw = [&rng](double c) { return -c + 2.0 * c * uniform01(rng); };
  for (std::size_t l = 0; l < shape.layers; ++l) {
    if (scheme == InitScheme::kDelta) {
      const double c = 0.1 / std::sqrt(static_cast<double>(shape.taps));
      for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(shape.taps); ++k) p.filter(l)(k) = draw(c);
      p.filter(l)(static_cast<Eigen::Index>((shape.taps - 1) / 2)) += 1.0;
      continue;
    }
    const double c = bound(shape.taps);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(shape.taps); ++k) p.filter(l)(k) = draw(c);
  }
  const double c = bound(shape.hops);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(shape.hops); ++k) p.readout()(k) = draw(c);
  // Biases start at zero.
  return p;
}

Vector convolve_same(const Eigen::Ref<const Vector>& filter, const Vector& input) {
  const Eigen::Index n = input.size();
  const Eigen::Index taps = filter.size();
  const Eigen::Index c = centre(static_cast<std::size_t>(taps));
  Vector out = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < taps; ++k) {
      const Eigen::Index src = i - k + c;
      if (src >= 0 && src < n) acc += filter(k) * input(src);
    }
    out(i) = acc;
  }
  return out;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double forward(const Vector& sequence, const PolicyParameters& params, LayerCache* cache) {
  const PolicyShape& s = params.shape();
  if (static_cast<std::size_t>(sequence.size()) != s.hops)
    throw InvalidArgument("forward: sequence length " + std::to_string(sequence.size()) +
                          " does not match hop depth " + std::to_string(s.hops));
  Vector v = sequence;
  if (cache) {
    cache->shape = s;
    cache->pre.clear();
    cache->post.clear();
    cache->post.push_back(v);
  }
  for (std::size_t l = 0; l < s.layers; ++l) {
    Vector u = convolve_same(params.filter(l), v);
    if (s.bias) u.array() += params.layer_bias(l);
    v = u.cwiseMax(0.0);
    if (cache) {
      cache->pre.push_back(std::move(u));
      cache->post.push_back(v);
    }
  }
  const double logit = params.readout().dot(v) + params.readout_bias();
  const double q = sigmoid(logit);
  if (cache) {
    cache->logit = logit;
    cache->q = q;
  }
  return q;
}

AllocationDecision sample_allocation(double q, double p0, Rng& rng) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("sample_allocation: q must lie in [0, 1]");
  if (!(p0 > 0.0)) throw InvalidArgument("sample_allocation: p0 must be > 0");
  AllocationDecision d;
  d.q = q;
  d.transmit = uniform01(rng) < q;
  d.p = d.transmit ? p0 : 0.0;
  return d;
}

Vector backpropagate(const LayerCache& cache, const PolicyParameters& params, double sensitivity) {
  require_shape(cache, params);
  const PolicyShape& s = params.shape();
  const auto taps = static_cast<Eigen::Index>(s.taps);
  const auto n = static_cast<Eigen::Index>(s.hops);
  const Eigen::Index c = centre(s.taps);

  Vector grad = Vector::Zero(static_cast<Eigen::Index>(params.size()));
  grad.segment(params.readout_offset(), n) = sensitivity * cache.post[s.layers];
  if (s.bias) grad(params.readout_bias_offset()) = sensitivity;

  Vector delta = sensitivity * params.readout();  // d logit / d post[l]
  for (std::size_t l = s.layers; l-- > 0;) {
    const Vector& u = cache.pre[l];
    const Vector& input = cache.post[l];
    Vector du = (u.array() > 0.0).select(delta, 0.0);
    const auto alpha = params.filter(l);
    Vector dinput = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (du(i) == 0.0) continue;
      for (Eigen::Index k = 0; k < taps; ++k) {
        const Eigen::Index src = i - k + c;
        if (src < 0 || src >= n) continue;
        grad(params.filter_offset(l) + k) += du(i) * input(src);
        dinput(src) += du(i) * alpha(k);
      }
    }
    if (s.bias) grad(params.bias_offset(l)) = du.sum();
    delta = std::move(dinput);
  }
  return grad;
}

Vector score_gradient(const LayerCache& cache, const AllocationDecision& decision,
                      const PolicyParameters& params) {
  if (decision.q != cache.q) throw InvalidState("score_gradient: decision was not produced by this cache");
  const double a = decision.transmit ? 1.0 : 0.0;
  return backpropagate(cache, params, a - cache.q);
}

void save_model(const std::filesystem::path& path, const PolicyParameters& params) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file " + path.string());
  const PolicyShape& s = params.shape();
  out << kModelMagic << " v" << kModelVersion << "\n"
      << "layers " << s.layers << "\n"
      << "taps " << s.taps << "\n"
      << "hops " << s.hops << "\n"
      << "bias " << (s.bias ? 1 : 0) << "\n"
      << "params " << params.size() << "\n";
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < params.flat().size(); ++i) out << params.flat()(i) << "\n";
  if (!out) throw IoError("failed writing model file " + path.string());
}

PolicyParameters load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("model file not found: " + path.string());
  std::string magic, version;
  in >> magic >> version;
  if (magic != kModelMagic || version != "v" + std::to_string(kModelVersion))
    throw ConfigError("not an agnn model file (v" + std::to_string(kModelVersion) + "): " + path.string());

  auto read_field = [&in, &path](std::string_view key) {
    std::string name;
    std::size_t value = 0;
    if (!(in >> name >> value) || name != key)
      throw ConfigError("model file " + path.string() + ": expected field '" + std::string(key) + "'");
    return value;
  };
  PolicyShape s;
  s.layers = read_field("layers");
  s.taps = read_field("taps");
  s.hops = read_field("hops");
  s.bias = read_field("bias") != 0;
  const std::size_t count = read_field("params");
  PolicyParameters params(s);
  if (count != params.size())
    throw ConfigError("model file " + path.string() + ": parameter count does not match header");
  for (Eigen::Index i = 0; i < params.flat().size(); ++i)
    if (!(in >> params.flat()(i))) throw ConfigError("model file " + path.string() + ": truncated");
  return params;
}

}  // namespace agnn
