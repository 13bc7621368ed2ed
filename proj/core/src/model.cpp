#include "auxlstm/model.hpp"

#include "auxlstm/errors.hpp"
#include "auxlstm/rng.hpp"

namespace auxlstm {

Model Model::create(const ExperimentConfig& config, TokenMode token_mode, std::size_t input_dim,
                    std::size_t num_classes) {
  const auto& mc = config.model;
  if (num_classes < 2) throw ConfigError("model: need at least two classes");
  const RngStream root = RngStream(config.seed).split("init");
  Model m;
  m.mode = config.mode;

  RngStream r = root.split("embedding");
  m.embedding = EmbeddingTable::uniform(token_mode, input_dim, mc.embed, r, mc.init_scale);
  r = root.split("lstm");
  m.lstm = LstmParams::uniform(mc.embed, mc.hidden, r, mc.init_scale, mc.forget_bias);
  r = root.split("head");
  m.head = FfnParams::uniform(mc.hidden, mc.ffn, num_classes, r, mc.drop_connect, mc.init_scale);

  if (config.has_aux()) {
    AuxDecoderShape shape;
    shape.kind = config.mode == TrainMode::kPrediction ? AuxKind::kPrediction
                                                       : AuxKind::kReconstruction;
    shape.token_mode = token_mode;
    shape.embed_dim = mc.embed;
    shape.main_hidden = mc.hidden;
    shape.token_dim = input_dim;
    shape.ffn_hidden = mc.aux_ffn;
    shape.drop_connect = mc.aux_drop_connect;
    shape.init_scale = mc.init_scale;
    shape.forget_bias_offset = mc.forget_bias;
    r = root.split("decoder");
    m.decoder = AuxDecoderParams::create(shape, r);
  }
  return m;
}

Model Model::zeros_like() const {
  Model g;
  g.mode = mode;
  g.embedding = embedding.zeros_like();
  g.lstm = lstm.zeros_like();
  g.head = head.zeros_like();
  if (decoder) g.decoder = decoder->zeros_like();
  return g;
}

bool operator==(const Model& a, const Model& b) {
  if (a.mode != b.mode || a.decoder.has_value() != b.decoder.has_value()) return false;
  std::vector<const Tensor*> ta, tb;
  visit_blocks(a, [&](const std::string&, const Tensor& t) { ta.push_back(&t); });
  visit_blocks(b, [&](const std::string&, const Tensor& t) { tb.push_back(&t); });
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!(*ta[i] == *tb[i])) return false;
  }
  return true;
}

std::vector<ParamBlock> param_blocks(Model& model, const Model& grads) {
  std::vector<ParamBlock> blocks;
  visit_blocks(model, [&](const std::string& name, Tensor& t) { blocks.push_back({name, &t, nullptr}); });
  std::size_t i = 0;
  visit_blocks(grads, [&](const std::string& name, const Tensor& t) {
    if (i >= blocks.size() || blocks[i].name != name || !(blocks[i].value->shape() == t.shape())) {
      throw DimensionError("param_blocks: gradient layout does not match model at " + name);
    }
    blocks[i++].grad = &t;
  });
  if (i != blocks.size()) throw DimensionError("param_blocks: gradient is missing blocks");
  return blocks;
}

std::size_t parameter_count(const Model& model) {
  std::size_t n = 0;
  visit_blocks(model, [&](const std::string&, const Tensor& t) { n += t.size(); });
  return n;
}

double grad_squared_norm(const Model& grads) {
  double s = 0.0;
  visit_blocks(grads, [&](const std::string&, const Tensor& t) { s += squared_norm(t.data()); });
  return s;
}

}  // namespace auxlstm
