#include "orchid/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>

namespace orchid {
namespace {

constexpr char kMagic[8] = {'O', 'R', 'C', 'H', 'I', 'D', 'C', 'K'};

using learn::Matrix;
using nlohmann::json;

class TensorWriter {
 public:
  void add(const std::string& name, const Matrix& m) {
    manifest_.push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}});
    blobs_.push_back(&m);
  }
  void add(const std::string& name, const learn::Vector& v) { add_owned(name, Matrix(v)); }
  void add_set(const std::string& prefix, const learn::ParamSet& set) {
    for (std::size_t i = 0; i < set.size(); ++i) add(prefix + "/" + std::to_string(i), set[i]);
  }
  void add_owned(const std::string& name, Matrix m) {
    owned_.push_back(std::make_unique<Matrix>(std::move(m)));
    add(name, *owned_.back());
  }
  const json& manifest() const { return manifest_; }
  void write(std::ostream& out) const {
    for (const Matrix* m : blobs_) {
      out.write(reinterpret_cast<const char*>(m->data()),
                static_cast<std::streamsize>(m->size() * sizeof(double)));
    }
  }

 private:
  json manifest_ = json::array();
  std::vector<const Matrix*> blobs_;
  std::vector<std::unique_ptr<Matrix>> owned_;
};

class TensorReader {
 public:
  TensorReader(const json& manifest, std::istream& in) {
    for (const auto& t : manifest) {
      Matrix m(t.at("rows").get<Eigen::Index>(), t.at("cols").get<Eigen::Index>());
      in.read(reinterpret_cast<char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
      if (!in) throw std::runtime_error("checkpoint: truncated tensor data");
      tensors_.emplace(t.at("name").get<std::string>(), std::move(m));
    }
  }
  const Matrix& get(const std::string& name) const {
    const auto it = tensors_.find(name);
    if (it == tensors_.end()) throw std::runtime_error("checkpoint: missing tensor " + name);
    return it->second;
  }
  learn::ParamSet get_set(const std::string& prefix, std::size_t count) const {
    learn::ParamSet set;
    for (std::size_t i = 0; i < count; ++i) set.push_back(get(prefix + "/" + std::to_string(i)));
    return set;
  }

 private:
  std::map<std::string, Matrix> tensors_;
};

void check_layout(const learn::ParamSet& reference, const learn::ParamSet& loaded,
                  const std::string& what) {
  if (reference.size() != loaded.size()) throw std::runtime_error("checkpoint: " + what + " count");
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference[i].rows() != loaded[i].rows() || reference[i].cols() != loaded[i].cols()) {
      throw std::runtime_error("checkpoint: " + what + " shape mismatch at tensor " +
                               std::to_string(i));
    }
  }
}

json optimizer_meta(const learn::OptimizerState& s) {
  return {{"step", s.step}};
}

}  // namespace

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  TensorWriter w;
  w.add_set("actor", c.actor.params);
  w.add_set("critic", c.critic.params);
  w.add_set("actor_opt/m", c.actor_opt.first_moment);
  w.add_set("actor_opt/v", c.actor_opt.second_moment);
  w.add_set("critic_opt/m", c.critic_opt.first_moment);
  w.add_set("critic_opt/v", c.critic_opt.second_moment);

  Matrix poses(3, static_cast<Eigen::Index>(c.initial_poses.size()));
  for (std::size_t i = 0; i < c.initial_poses.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    poses(0, k) = c.initial_poses[i].x;
    poses(1, k) = c.initial_poses[i].y;
    poses(2, k) = c.initial_poses[i].z;
  }
  w.add_owned("initial_poses", std::move(poses));

  Matrix scalars(9, 1);
  scalars << c.baseline_ee, c.ee_norm.lo, c.ee_norm.hi, c.pf_norm.lo, c.pf_norm.hi,
      c.actor_opt.learning_rate, c.actor_opt.initial_learning_rate, c.critic_opt.learning_rate,
      c.critic_opt.initial_learning_rate;
  w.add_owned("scalars", std::move(scalars));

  json pending = json::array();
  for (std::size_t k = 0; k < c.pending.size(); ++k) {
    const auto& e = c.pending[k];
    const std::string p = "pending/" + std::to_string(k) + "/";
    w.add(p + "actor_inputs", e.actor_inputs);
    w.add(p + "pre_squash", e.pre_squash);
    w.add(p + "log_probs", e.log_probs);
    w.add(p + "rewards", e.rewards);
    w.add(p + "states", e.states);
    w.add(p + "values", e.values);
    pending.push_back({{"steps", e.steps}, {"agents", e.agents}});
  }

  json manifest{
      {"format", "orchid-checkpoint"},
      {"seed", c.seed},
      {"episode", c.episode},
      {"scenario_fingerprint", c.scenario_fingerprint},
      {"config", c.config},
      {"actor_layers", c.actor.net.sizes()},
      {"critic_layers", c.critic.net.sizes()},
      {"actor_opt", optimizer_meta(c.actor_opt)},
      {"critic_opt", optimizer_meta(c.critic_opt)},
      {"sampling_rng", c.sampling_rng},
      {"rnf", c.rnf.to_json()},
      {"rnf_trigger_episode",
       c.rnf.trigger_episode() ? json(*c.rnf.trigger_episode()) : json()},
      {"ee_norm_count", c.ee_norm.count},
      {"pf_norm_count", c.pf_norm.count},
      {"pending", pending},
      {"tensors", w.manifest()},
  };
  const std::string text = manifest.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kMagic, sizeof kMagic);
  const std::uint32_t version = kCheckpointVersion;
  const std::uint64_t length = text.size();
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&length), sizeof length);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  w.write(out);
  if (!out) throw std::runtime_error("failed writing " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t length = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&length), sizeof length);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw std::runtime_error(path + ": not an orchid checkpoint");
  }
  if (version != kCheckpointVersion) {
    throw std::runtime_error(path + ": unsupported checkpoint version " + std::to_string(version));
  }
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw std::runtime_error(path + ": truncated manifest");
  const json m = json::parse(text);
  const TensorReader r(m.at("tensors"), in);

  Checkpoint c;
  c.config = parse_run_config(m.at("config"));
  c.seed = m.at("seed").get<std::uint64_t>();
  c.episode = m.at("episode").get<int>();
  c.scenario_fingerprint = m.at("scenario_fingerprint").get<std::string>();

  c.actor.net = learn::Mlp(m.at("actor_layers").get<std::vector<int>>());
  c.critic.net = learn::Mlp(m.at("critic_layers").get<std::vector<int>>());
  const std::size_t actor_tensors = c.actor.net.tensor_count() + 1;
  const std::size_t critic_tensors = c.critic.net.tensor_count();
  c.actor.params = r.get_set("actor", actor_tensors);
  c.critic.params = r.get_set("critic", critic_tensors);
  learn::ParamSet expected_actor = c.actor.net.zero_params();
  expected_actor.push_back(Matrix::Zero(c.actor.net.output_dim(), 1));
  check_layout(expected_actor, c.actor.params, "actor");
  check_layout(c.critic.net.zero_params(), c.critic.params, "critic");

  c.actor_opt.first_moment = r.get_set("actor_opt/m", actor_tensors);
  c.actor_opt.second_moment = r.get_set("actor_opt/v", actor_tensors);
  c.critic_opt.first_moment = r.get_set("critic_opt/m", critic_tensors);
  c.critic_opt.second_moment = r.get_set("critic_opt/v", critic_tensors);
  check_layout(c.actor.params, c.actor_opt.first_moment, "actor moments");
  check_layout(c.actor.params, c.actor_opt.second_moment, "actor moments");
  check_layout(c.critic.params, c.critic_opt.first_moment, "critic moments");
  check_layout(c.critic.params, c.critic_opt.second_moment, "critic moments");
  c.actor_opt.step = m.at("actor_opt").at("step").get<std::int64_t>();
  c.critic_opt.step = m.at("critic_opt").at("step").get<std::int64_t>();

  const Matrix& poses = r.get("initial_poses");
  for (Eigen::Index k = 0; k < poses.cols(); ++k) {
    c.initial_poses.push_back({poses(0, k), poses(1, k), poses(2, k)});
  }
  const Matrix& s = r.get("scalars");
  c.baseline_ee = s(0);
  c.ee_norm = {s(1), s(2), m.at("ee_norm_count").get<std::uint64_t>()};
  c.pf_norm = {s(3), s(4), m.at("pf_norm_count").get<std::uint64_t>()};
  c.actor_opt.learning_rate = s(5);
  c.actor_opt.initial_learning_rate = s(6);
  c.critic_opt.learning_rate = s(7);
  c.critic_opt.initial_learning_rate = s(8);

  c.sampling_rng = m.at("sampling_rng").get<std::string>();
  c.rnf = rnf::RnfController::from_json(m.at("rnf"));

  const auto& pending = m.at("pending");
  for (std::size_t k = 0; k < pending.size(); ++k) {
    const std::string p = "pending/" + std::to_string(k) + "/";
    learn::EpisodeRollout e;
    e.steps = pending[k].at("steps").get<int>();
    e.agents = pending[k].at("agents").get<int>();
    e.actor_inputs = r.get(p + "actor_inputs");
    e.pre_squash = r.get(p + "pre_squash");
    e.log_probs = r.get(p + "log_probs");
    e.rewards = r.get(p + "rewards");
    e.states = r.get(p + "states");
    e.values = r.get(p + "values");
    c.pending.push_back(std::move(e));
  }
  return c;
}

}  // namespace orchid
