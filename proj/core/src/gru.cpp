#include "emomine/gru.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "emomine/rng.hpp"
#include "json.hpp"

namespace emomine {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::span<const double> input_row(const Spectrogram& spec, std::size_t t) {
    return {&spec.values.data[t * spec.bands()], spec.bands()};
}

GruParams make_params(std::size_t b, std::size_t h, std::size_t c) {
    GruParams p;
    for (DirectionParams* d : {&p.fw, &p.bw}) {
        d->in_update = Mat(b, h);
        d->in_reset = Mat(b, h);
        d->in_cand = Mat(b, h);
        d->rec_update = Mat(h, h);
        d->rec_reset = Mat(h, h);
        d->rec_cand = Mat(h, h);
    }
    p.head_w = Mat(2 * h, c);
    p.head_b.assign(c, 0.0);
    return p;
}

void fill_glorot(Mat& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : m.data) v = rng.uniform(-a, a);
}

// Orthonormalizes the columns of a random Gaussian matrix (modified
// Gram-Schmidt). Equivalent to the Q of a QR factorization with the sign
// convention that R's diagonal is positive.
void fill_orthogonal(Mat& m, Rng& rng) {
    const std::size_t n = m.rows;
    for (double& v : m.data) v = rng.gaussian();
    Vec col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) col[i] = m(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += m(i, k) * col[i];
                for (std::size_t i = 0; i < n; ++i) col[i] -= dot * m(i, k);
            }
            double norm = 0.0;
            for (double v : col) norm += v * v;
            norm = std::sqrt(norm);
            if (norm > 1e-12) {
                for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i] / norm;
                break;
            }
            // Degenerate draw; replace the column and try again.
            for (std::size_t i = 0; i < n; ++i) m(i, j) = rng.gaussian();
        }
    }
}

void run_direction(const DirectionParams& p, const Spectrogram& spec,
                   bool reverse, DirectionTrace& trace) {
    const std::size_t t_count = spec.valid_frames;
    const std::size_t h_dim = p.in_update.cols;
    trace.update.assign(t_count, Vec());
    trace.reset.assign(t_count, Vec());
    trace.cand.assign(t_count, Vec());
    trace.state.assign(t_count, Vec());

    const Vec zero(h_dim, 0.0);
    Vec tmp, sr(h_dim);
    auto preact = [&](std::span<const double> x, const Mat& u, const Vec& s,
                      const Mat& w, Vec& out) {
        mul_row(x, u, out);
        mul_row(s, w, tmp);
        for (std::size_t i = 0; i < h_dim; ++i) out[i] += tmp[i];
    };

    for (std::size_t k = 0; k < t_count; ++k) {
        const std::size_t t = reverse ? t_count - 1 - k : k;
        const Vec& s_prev =
            k == 0 ? zero : trace.state[reverse ? t + 1 : t - 1];
        const auto x = input_row(spec, t);

        Vec& z = trace.update[t];
        Vec& r = trace.reset[t];
        Vec& h = trace.cand[t];
        Vec& s = trace.state[t];

        preact(x, p.in_update, s_prev, p.rec_update, z);
        for (double& v : z) v = sigmoid(v);
        preact(x, p.in_reset, s_prev, p.rec_reset, r);
        for (double& v : r) v = sigmoid(v);
        for (std::size_t i = 0; i < h_dim; ++i) sr[i] = s_prev[i] * r[i];
        preact(x, p.in_cand, sr, p.rec_cand, h);
        for (double& v : h) v = std::tanh(v);
        s.resize(h_dim);
        for (std::size_t i = 0; i < h_dim; ++i)
            s[i] = (1.0 - z[i]) * h[i] + z[i] * s_prev[i];
    }
}

// Accumulates one direction's parameter gradients. Steps are visited in
// reverse dependency order (last-computed first), carrying the gradient
// that flows through the recurrent state.
void backprop_direction(const DirectionParams& p, DirectionParams& g,
                        const DirectionTrace& trace, const Spectrogram& spec,
                        std::span<const double> dpool_share, bool reverse) {
    const std::size_t t_count = trace.state.size();
    const std::size_t h_dim = p.in_update.cols;
    const double inv_t = 1.0 / static_cast<double>(t_count);

    const Vec zero(h_dim, 0.0);
    Vec carry(h_dim, 0.0);
    Vec ds(h_dim), ds_prev(h_dim), dz(h_dim), dh(h_dim), da_h(h_dim);
    Vec d_sr(h_dim), dr(h_dim), da_z(h_dim), da_r(h_dim), sr(h_dim);
    Vec tmp;

    for (std::size_t k = 0; k < t_count; ++k) {
        const std::size_t t = reverse ? k : t_count - 1 - k;
        const bool has_prev = reverse ? t + 1 < t_count : t > 0;
        const Vec& s_prev =
            has_prev ? trace.state[reverse ? t + 1 : t - 1] : zero;
        const Vec& z = trace.update[t];
        const Vec& r = trace.reset[t];
        const Vec& h = trace.cand[t];
        const auto x = input_row(spec, t);

        for (std::size_t i = 0; i < h_dim; ++i) {
            ds[i] = dpool_share[i] * inv_t + carry[i];
            dz[i] = ds[i] * (s_prev[i] - h[i]);
            dh[i] = ds[i] * (1.0 - z[i]);
            ds_prev[i] = ds[i] * z[i];
            da_h[i] = dh[i] * (1.0 - h[i] * h[i]);
            sr[i] = s_prev[i] * r[i];
        }
        add_outer(g.in_cand, x, da_h);
        add_outer(g.rec_cand, sr, da_h);
        mul_row_transposed(da_h, p.rec_cand, d_sr);
        for (std::size_t i = 0; i < h_dim; ++i) {
            dr[i] = d_sr[i] * s_prev[i];
            ds_prev[i] += d_sr[i] * r[i];
            da_z[i] = dz[i] * z[i] * (1.0 - z[i]);
            da_r[i] = dr[i] * r[i] * (1.0 - r[i]);
        }
        add_outer(g.in_update, x, da_z);
        add_outer(g.rec_update, s_prev, da_z);
        add_outer(g.in_reset, x, da_r);
        add_outer(g.rec_reset, s_prev, da_r);
        mul_row_transposed(da_z, p.rec_update, tmp);
        for (std::size_t i = 0; i < h_dim; ++i) ds_prev[i] += tmp[i];
        mul_row_transposed(da_r, p.rec_reset, tmp);
        for (std::size_t i = 0; i < h_dim; ++i) ds_prev[i] += tmp[i];
        std::swap(carry, ds_prev);
    }
}

void check_tensor_finite(std::span<const double> t, const std::string& name) {
    for (double v : t)
        if (!std::isfinite(v))
            throw NonFiniteInputError("parameter tensor " + name +
                                      " contains a non-finite value");
}

}  // namespace

std::vector<std::span<double>> GruParams::tensors() {
    return {
        fw.in_update.data,  fw.in_reset.data,  fw.in_cand.data,
        fw.rec_update.data, fw.rec_reset.data, fw.rec_cand.data,
        bw.in_update.data,  bw.in_reset.data,  bw.in_cand.data,
        bw.rec_update.data, bw.rec_reset.data, bw.rec_cand.data,
        head_w.data,        head_b,
    };
}

std::vector<std::span<const double>> GruParams::tensors() const {
    return {
        fw.in_update.data,  fw.in_reset.data,  fw.in_cand.data,
        fw.rec_update.data, fw.rec_reset.data, fw.rec_cand.data,
        bw.in_update.data,  bw.in_reset.data,  bw.in_cand.data,
        bw.rec_update.data, bw.rec_reset.data, bw.rec_cand.data,
        head_w.data,        head_b,
    };
}

const std::vector<std::string>& GruParams::tensor_names() {
    static const std::vector<std::string> names = {
        "fw.in_update",  "fw.in_reset",  "fw.in_cand",
        "fw.rec_update", "fw.rec_reset", "fw.rec_cand",
        "bw.in_update",  "bw.in_reset",  "bw.in_cand",
        "bw.rec_update", "bw.rec_reset", "bw.rec_cand",
        "head.weight",   "head.bias",
    };
    return names;
}

std::size_t GruParams::parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors()) n += t.size();
    return n;
}

void GruParams::check_consistent() const {
    const std::size_t b = input_dim();
    const std::size_t h = hidden_dim();
    const std::size_t c = class_count();
    if (b == 0 || h == 0 || c == 0)
        throw DimensionMismatchError("model has a zero dimension");
    for (const DirectionParams* d : {&fw, &bw}) {
        for (const Mat* m : {&d->in_update, &d->in_reset, &d->in_cand})
            if (m->rows != b || m->cols != h)
                throw DimensionMismatchError("input matrix shape mismatch");
        for (const Mat* m : {&d->rec_update, &d->rec_reset, &d->rec_cand})
            if (m->rows != h || m->cols != h)
                throw DimensionMismatchError("recurrent matrix shape mismatch");
    }
    if (head_w.rows != 2 * h || head_w.cols != c)
        throw DimensionMismatchError("head weight shape mismatch");
}

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw Error("learning_rate must be finite and non-negative");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0))
        throw Error("adam_beta1 must lie in [0, 1)");
    if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
        throw Error("adam_beta2 must lie in [0, 1)");
    if (!(adam_eps > 0.0)) throw Error("adam_eps must be positive");
    if (batch_size == 0) throw Error("batch_size must be positive");
    if (max_epochs == 0) throw Error("max_epochs must be positive");
    if (patience == 0) throw Error("patience must be positive");
    if (patience > max_epochs) throw Error("patience must not exceed max_epochs");
    if (!(grad_clip_norm > 0.0)) throw Error("grad_clip_norm must be positive");
}

GruParams init_params(std::uint64_t rng_seed, std::size_t input_dim,
                      std::size_t hidden_dim, std::size_t class_count) {
    if (input_dim == 0 || hidden_dim == 0 || class_count == 0)
        throw DimensionMismatchError("init_params needs positive dimensions");
    Rng rng(rng_seed);
    GruParams p = make_params(input_dim, hidden_dim, class_count);
    for (DirectionParams* d : {&p.fw, &p.bw}) {
        fill_glorot(d->in_update, input_dim, hidden_dim, rng);
        fill_glorot(d->in_reset, input_dim, hidden_dim, rng);
        fill_glorot(d->in_cand, input_dim, hidden_dim, rng);
        fill_orthogonal(d->rec_update, rng);
        fill_orthogonal(d->rec_reset, rng);
        fill_orthogonal(d->rec_cand, rng);
    }
    fill_glorot(p.head_w, 2 * hidden_dim, class_count, rng);
    // head_b already zero
    return p;
}

Mat glorot_matrix(std::size_t rows, std::size_t cols, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    Mat m(rows, cols);
    fill_glorot(m, rows, cols, rng);
    return m;
}

GruParams zeros_like(const GruParams& shape) {
    return make_params(shape.input_dim(), shape.hidden_dim(),
                       shape.class_count());
}

GruState forward(const GruParams& params, const Spectrogram& spec) {
    params.check_consistent();
    if (spec.bands() != params.input_dim())
        throw DimensionMismatchError(
            "spectrogram has " + std::to_string(spec.bands()) +
            " bands but the model expects " +
            std::to_string(params.input_dim()));
    if (spec.valid_frames == 0)
        throw DimensionMismatchError("spectrogram has no valid frames");
    if (spec.valid_frames > spec.values.rows)
        throw DimensionMismatchError("valid_frames exceeds stored rows");
    for (std::size_t t = 0; t < spec.valid_frames; ++t)
        for (double v : input_row(spec, t))
            if (!std::isfinite(v))
                throw NonFiniteInputError("non-finite feature value in frame " +
                                          std::to_string(t));

    GruState st;
    run_direction(params.fw, spec, false, st.fw);
    run_direction(params.bw, spec, true, st.bw);

    const std::size_t h_dim = params.hidden_dim();
    const std::size_t t_count = spec.valid_frames;
    st.pooled.assign(2 * h_dim, 0.0);
    for (std::size_t t = 0; t < t_count; ++t)
        for (std::size_t i = 0; i < h_dim; ++i) {
            st.pooled[i] += st.fw.state[t][i];
            st.pooled[h_dim + i] += st.bw.state[t][i];
        }
    for (double& v : st.pooled) v /= static_cast<double>(t_count);

    Vec logits;
    mul_row(st.pooled, params.head_w, logits);
    for (std::size_t c = 0; c < logits.size(); ++c)
        logits[c] += params.head_b[c];
    const double peak = *std::max_element(logits.begin(), logits.end());
    double norm = 0.0;
    st.probs.resize(logits.size());
    for (std::size_t c = 0; c < logits.size(); ++c) {
        st.probs[c] = std::exp(logits[c] - peak);
        norm += st.probs[c];
    }
    for (double& v : st.probs) v /= norm;
    return st;
}

double loss(const Vec& probs, std::size_t true_class) {
    if (true_class >= probs.size())
        throw BadClassIndexError("class index " + std::to_string(true_class) +
                                 " out of range for " +
                                 std::to_string(probs.size()) + " classes");
    double sum = 0.0;
    for (double p : probs) sum += p;
    if (std::abs(sum - 1.0) > 1e-6)
        throw Error("probabilities do not sum to 1");
    const double p = std::max(probs[true_class], 1e-12);
    return -std::log(p);
}

GruParams backward(const GruParams& params, const GruState& state,
                   const Spectrogram& spec, std::size_t true_class) {
    params.check_consistent();
    const std::size_t h_dim = params.hidden_dim();
    const std::size_t c_count = params.class_count();
    if (true_class >= c_count)
        throw BadClassIndexError("class index out of range");
    if (state.fw.state.size() != spec.valid_frames ||
        state.bw.state.size() != spec.valid_frames ||
        state.probs.size() != c_count || state.pooled.size() != 2 * h_dim)
        throw DimensionMismatchError(
            "state does not match the given parameters and input");

    GruParams grads = zeros_like(params);

    Vec dlogits = state.probs;
    dlogits[true_class] -= 1.0;
    for (std::size_t c = 0; c < c_count; ++c)
        grads.head_b[c] += dlogits[c];
    add_outer(grads.head_w, state.pooled, dlogits);

    Vec dpooled;
    mul_row_transposed(dlogits, params.head_w, dpooled);
    const std::span<const double> dp(dpooled);
    backprop_direction(params.fw, grads.fw, state.fw, spec,
                       dp.subspan(0, h_dim), false);
    backprop_direction(params.bw, grads.bw, state.bw, spec,
                       dp.subspan(h_dim, h_dim), true);
    return grads;
}

AdamState AdamState::zeros_like(const GruParams& shape) {
    AdamState s;
    s.m = emomine::zeros_like(shape);
    s.v = emomine::zeros_like(shape);
    s.step = 0;
    return s;
}

double train_epoch(GruParams& params, AdamState& opt,
                   const std::vector<TrainExample>& dataset,
                   const TrainConfig& cfg, std::size_t epoch_index) {
    cfg.validate();
    params.check_consistent();
    if (dataset.empty()) throw Error("train_epoch called with empty dataset");

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(cfg.rng_seed + epoch_index);
    rng.shuffle(order);

    double total_loss = 0.0;
    GruParams batch_grads = zeros_like(params);

    for (std::size_t begin = 0; begin < order.size();
         begin += cfg.batch_size) {
        const std::size_t end =
            std::min(begin + cfg.batch_size, order.size());
        const double inv_batch = 1.0 / static_cast<double>(end - begin);

        auto acc = batch_grads.tensors();
        for (auto t : acc) std::fill(t.begin(), t.end(), 0.0);

        for (std::size_t k = begin; k < end; ++k) {
            const TrainExample& ex = dataset[order[k]];
            const GruState st = forward(params, *ex.features);
            const double l = loss(st.probs, ex.label);
            if (!std::isfinite(l))
                throw NonFiniteLossError("non-finite loss on example " +
                                         std::to_string(order[k]));
            total_loss += l;
            const GruParams g = backward(params, st, *ex.features, ex.label);
            const auto gt = g.tensors();
            for (std::size_t ti = 0; ti < acc.size(); ++ti)
                for (std::size_t i = 0; i < acc[ti].size(); ++i)
                    acc[ti][i] += gt[ti][i];
        }
        for (auto t : acc)
            for (double& v : t) v *= inv_batch;

        double sq_norm = 0.0;
        for (auto t : acc)
            for (double v : t) sq_norm += v * v;
        const double norm = std::sqrt(sq_norm);
        if (norm > cfg.grad_clip_norm) {
            const double scale = cfg.grad_clip_norm / norm;
            for (auto t : acc)
                for (double& v : t) v *= scale;
        }

        opt.step += 1;
        const double bc1 =
            1.0 - std::pow(cfg.adam_beta1, static_cast<double>(opt.step));
        const double bc2 =
            1.0 - std::pow(cfg.adam_beta2, static_cast<double>(opt.step));
        auto pw = params.tensors();
        auto mt = opt.m.tensors();
        auto vt = opt.v.tensors();
        for (std::size_t ti = 0; ti < pw.size(); ++ti) {
            for (std::size_t i = 0; i < pw[ti].size(); ++i) {
                const double g = acc[ti][i];
                mt[ti][i] = cfg.adam_beta1 * mt[ti][i] +
                            (1.0 - cfg.adam_beta1) * g;
                vt[ti][i] = cfg.adam_beta2 * vt[ti][i] +
                            (1.0 - cfg.adam_beta2) * g * g;
                const double m_hat = mt[ti][i] / bc1;
                const double v_hat = vt[ti][i] / bc2;
                pw[ti][i] -= cfg.learning_rate * m_hat /
                             (std::sqrt(v_hat) + cfg.adam_eps);
            }
        }
    }
    return total_loss / static_cast<double>(dataset.size());
}

double evaluate_loss(const GruParams& params,
                     const std::vector<TrainExample>& dataset) {
    if (dataset.empty()) throw Error("evaluate_loss called with empty dataset");
    double total = 0.0;
    for (const TrainExample& ex : dataset)
        total += loss(forward(params, *ex.features).probs, ex.label);
    return total / static_cast<double>(dataset.size());
}

namespace {

constexpr char kModelMagic[4] = {'E', 'M', 'O', 'G'};
constexpr std::uint32_t kModelVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {
        static_cast<unsigned char>(v & 0xFF),
        static_cast<unsigned char>((v >> 8) & 0xFF),
        static_cast<unsigned char>((v >> 16) & 0xFF),
        static_cast<unsigned char>((v >> 24) & 0xFF),
    };
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double d) {
    const std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw BadModelFileError("model file truncated");
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8))
        throw BadModelFileError("model file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(v);
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    std::filesystem::path p = path;
    p += ".json";
    return p;
}

}  // namespace

void save_model(const std::filesystem::path& path, const Model& model) {
    model.params.check_consistent();
    const std::size_t b = model.params.input_dim();
    const std::size_t c = model.params.class_count();
    if (model.labels.size() != c)
        throw DimensionMismatchError("label count does not match class count");
    if (model.feature_mean.size() != b || model.feature_std.size() != b)
        throw DimensionMismatchError(
            "standardization vectors do not match input width");
    for (const auto& t : model.params.tensors())
        check_tensor_finite(t, "being saved");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write model file: " + path.string());
    out.write(kModelMagic, 4);
    put_u32(out, kModelVersion);
    put_u32(out, static_cast<std::uint32_t>(b));
    put_u32(out, static_cast<std::uint32_t>(model.params.hidden_dim()));
    put_u32(out, static_cast<std::uint32_t>(c));
    for (const auto& t : model.params.tensors())
        for (double v : t) put_f64(out, v);
    if (!out) throw Error("short write to model file: " + path.string());
    out.close();

    nlohmann::json side;
    side["labels"] = model.labels;
    side["feature_mean"] = model.feature_mean;
    side["feature_std"] = model.feature_std;
    std::ofstream js(sidecar_path(path), std::ios::trunc);
    if (!js) throw Error("cannot write sidecar: " + sidecar_path(path).string());
    js << side.dump(2) << "\n";
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path.string());
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0)
        throw BadModelFileError("not a model file: " + path.string());
    const std::uint32_t version = get_u32(in);
    if (version != kModelVersion)
        throw BadModelFileError("unsupported model version " +
                                std::to_string(version));
    const std::uint32_t b = get_u32(in);
    const std::uint32_t h = get_u32(in);
    const std::uint32_t c = get_u32(in);
    constexpr std::uint32_t kDimCap = 1u << 20;
    if (b == 0 || h == 0 || c == 0 || b > kDimCap || h > kDimCap || c > kDimCap)
        throw BadModelFileError("implausible model dimensions");

    Model model;
    model.params = make_params(b, h, c);
    for (auto t : model.params.tensors())
        for (double& v : t) v = get_f64(in);
    if (in.peek() != std::char_traits<char>::eof())
        throw BadModelFileError("trailing bytes in model file");
    for (const auto& t : model.params.tensors())
        check_tensor_finite(t, "loaded from file");

    std::ifstream js(sidecar_path(path));
    if (!js)
        throw BadModelFileError("missing model sidecar: " +
                                sidecar_path(path).string());
    nlohmann::json side;
    try {
        js >> side;
    } catch (const nlohmann::json::exception& e) {
        throw BadModelFileError("unreadable model sidecar: " +
                                std::string(e.what()));
    }
    if (!side.contains("labels") || !side.contains("feature_mean") ||
        !side.contains("feature_std"))
        throw BadModelFileError("model sidecar is missing required fields");
    try {
        model.labels = side["labels"].get<std::vector<std::string>>();
        model.feature_mean = side["feature_mean"].get<Vec>();
        model.feature_std = side["feature_std"].get<Vec>();
    } catch (const nlohmann::json::exception& e) {
        throw BadModelFileError("malformed model sidecar: " +
                                std::string(e.what()));
    }
    if (model.labels.size() != c)
        throw BadModelFileError("sidecar label count does not match model");
    if (model.feature_mean.size() != b || model.feature_std.size() != b)
        throw BadModelFileError(
            "sidecar standardization width does not match model");
    for (double v : model.feature_std)
        if (!(v > 0.0))
            throw BadModelFileError("feature_std entries must be positive");
    return model;
}

}  // namespace emomine
