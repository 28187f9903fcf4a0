#include "wavesel/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "wavesel/errors.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/text_io.hpp"

namespace wavesel {

void LabeledDataset::validate() const {
    std::unordered_set<std::int64_t> seen;
    seen.reserve(rows.size());
    for (const LabeledRow& row : rows) {
        if (row.label < 1 || row.label > kNumClasses) {
            throw DomainError("label out of range for scenario " +
                              std::to_string(row.scenario_id));
        }
        if (!seen.insert(row.scenario_id).second) {
            throw DomainError("duplicate scenario_id " + std::to_string(row.scenario_id));
        }
    }
}

std::string labeled_csv_header() {
    return "scenario_id,f1,f2,f3,f4,f5,f6,f7,label";
}

void write_csv(const LabeledDataset& dataset, const std::string& path) {
    dataset.validate();
    std::string out = labeled_csv_header() + "\n";
    for (const LabeledRow& row : dataset.rows) {
        out += std::to_string(row.scenario_id);
        for (double v : row.features.as_array()) {
            out += "," + format_g9(v);
        }
        out += "," + std::to_string(row.label) + "\n";
    }
    atomic_write_file(path, out);
}

LabeledDataset read_csv(const std::string& path) {
    const std::vector<std::string> lines = split_lines(read_file(path));
    if (lines.empty()) {
        throw ParseError(path + ": missing header");
    }
    if (lines[0] != labeled_csv_header()) {
        throw ParseError(path + ": unexpected header '" + lines[0] + "'");
    }
    LabeledDataset dataset;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (strip(lines[li]).empty()) continue;
        const std::string ctx = path + ":" + std::to_string(li + 1);
        const std::vector<std::string> fields = split_csv(lines[li]);
        if (fields.size() != 2 + kNumFeatures) {
            throw ParseError(ctx + ": expected " + std::to_string(2 + kNumFeatures) +
                             " columns, got " + std::to_string(fields.size()));
        }
        LabeledRow row;
        row.scenario_id = parse_int(fields[0], ctx);
        std::array<double, kNumFeatures> x{};
        for (int f = 0; f < kNumFeatures; ++f) {
            x[static_cast<std::size_t>(f)] =
                parse_double(fields[static_cast<std::size_t>(1 + f)], ctx);
        }
        row.features = FeatureVector::from_array(x);
        const std::int64_t label = parse_int(fields[1 + kNumFeatures], ctx);
        if (label < 1 || label > kNumClasses) {
            throw ParseError(ctx + ": label out of range");
        }
        row.label = static_cast<int>(label);
        dataset.rows.push_back(row);
    }
    dataset.validate();
    return dataset;
}

void SplitSpec::validate() const {
    if (!(train_frac > 0.0) || !(val_frac > 0.0) || !(test_frac > 0.0)) {
        throw ConfigError("split fractions must be positive");
    }
    if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-12) {
        throw ConfigError("split fractions must sum to 1");
    }
}

SplitResult split_stratified(const LabeledDataset& dataset, const SplitSpec& spec) {
    spec.validate();
    dataset.validate();

    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
        by_class[static_cast<std::size_t>(dataset.rows[i].label - 1)].push_back(i);
    }

    // split index per dataset row: 0 train, 1 val, 2 test
    std::vector<int> assignment(dataset.rows.size(), -1);
    const std::array<double, 3> fracs = {spec.train_frac, spec.val_frac, spec.test_frac};

    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t>& idx = by_class[static_cast<std::size_t>(c)];
        if (idx.size() < 3) {
            throw ConfigError("class " + std::to_string(c + 1) + " has only " +
                              std::to_string(idx.size()) + " rows; need at least 3 to split");
        }
        Rng rng(substream_seed(spec.seed, static_cast<std::uint64_t>(c + 1)));
        for (std::size_t i = idx.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
            std::swap(idx[i - 1], idx[j]);
        }

        // Largest-remainder allocation keeps every split within one row of
        // exact proportionality and the total exact.
        const double n = static_cast<double>(idx.size());
        std::array<std::size_t, 3> take{};
        std::array<double, 3> remainder{};
        std::size_t assigned = 0;
        for (int s = 0; s < 3; ++s) {
            const double ideal = n * fracs[static_cast<std::size_t>(s)];
            take[static_cast<std::size_t>(s)] = static_cast<std::size_t>(std::floor(ideal));
            remainder[static_cast<std::size_t>(s)] =
                ideal - static_cast<double>(take[static_cast<std::size_t>(s)]);
            assigned += take[static_cast<std::size_t>(s)];
        }
        while (assigned < idx.size()) {
            int best = 0;
            for (int s = 1; s < 3; ++s) {
                if (remainder[static_cast<std::size_t>(s)] >
                    remainder[static_cast<std::size_t>(best)]) {
                    best = s;
                }
            }
            ++take[static_cast<std::size_t>(best)];
            remainder[static_cast<std::size_t>(best)] = -1.0;
            ++assigned;
        }

        std::size_t pos = 0;
        for (int s = 0; s < 3; ++s) {
            for (std::size_t i = 0; i < take[static_cast<std::size_t>(s)]; ++i, ++pos) {
                assignment[idx[pos]] = s;
            }
        }
    }

    SplitResult result;
    result.train.config_hash = result.val.config_hash = result.test.config_hash =
        dataset.config_hash;
    result.train.master_seed = result.val.master_seed = result.test.master_seed =
        dataset.master_seed;
    for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
        switch (assignment[i]) {
            case 0: result.train.rows.push_back(dataset.rows[i]); break;
            case 1: result.val.rows.push_back(dataset.rows[i]); break;
            default: result.test.rows.push_back(dataset.rows[i]); break;
        }
    }
    return result;
}

MlDataset to_ml_dataset(const LabeledDataset& dataset, const Scaler& scaler) {
    MlDataset out;
    out.x.reserve(dataset.rows.size());
    out.y.reserve(dataset.rows.size());
    for (const LabeledRow& row : dataset.rows) {
        out.x.push_back(scaler.apply(row.features.as_array()));
        out.y.push_back(row.label);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Model serialization

namespace {

void append_doubles(std::string& out, const char* name, const double* data, std::size_t n) {
    out += name;
    for (std::size_t i = 0; i < n; ++i) {
        out += " ";
        out += format_g17(data[i]);
    }
    out += "\n";
}

/// Line-oriented reader with strict token access.
struct Reader {
    std::vector<std::string> lines;
    std::size_t pos = 0;

    const std::string& next_line() {
        while (pos < lines.size() && strip(lines[pos]).empty()) ++pos;
        if (pos >= lines.size()) {
            throw LoadError("model file: unexpected end of file");
        }
        return lines[pos++];
    }

    std::vector<std::string> next_tokens(const std::string& expected_head) {
        std::istringstream ss(next_line());
        std::vector<std::string> tokens;
        std::string t;
        while (ss >> t) tokens.push_back(t);
        if (tokens.empty() || tokens[0] != expected_head) {
            throw LoadError("model file: expected section '" + expected_head + "'");
        }
        return tokens;
    }

    void read_doubles(const std::string& head, double* out, std::size_t n) {
        const std::vector<std::string> tokens = next_tokens(head);
        if (tokens.size() != n + 1) {
            throw LoadError("model file: section '" + head + "' expects " + std::to_string(n) +
                            " values");
        }
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = parse_double(tokens[i + 1], "model " + head);
        }
    }

    std::int64_t read_int(const std::string& head) {
        const std::vector<std::string> tokens = next_tokens(head);
        if (tokens.size() != 2) {
            throw LoadError("model file: section '" + head + "' expects one value");
        }
        return parse_int(tokens[1], "model " + head);
    }
};

std::string scaler_section(const Scaler& scaler) { return scaler_to_text(scaler); }

Scaler read_scaler_section(Reader& reader) {
    std::string block;
    const std::string& head = reader.next_line();
    if (strip(head) != "scaler v1") {
        throw LoadError("model file: missing scaler section");
    }
    block += head + "\n";
    for (int i = 0; i < kNumFeatures; ++i) {
        block += reader.next_line() + "\n";
    }
    return scaler_from_text(block);
}

}  // namespace

std::string model_to_text(const Model& model) {
    std::string out = std::string("model ") + model_kind_name(model.kind()) + " v1\n";
    out += scaler_section(model.scaler);

    switch (model.kind()) {
        case ModelKind::KNN: {
            const KnnModel& m = std::get<KnnModel>(model.impl);
            out += "k " + std::to_string(m.k) + "\n";
            out += "points " + std::to_string(m.points.size()) + "\n";
            for (std::size_t i = 0; i < m.points.size(); ++i) {
                out += "p";
                for (double v : m.points[i]) {
                    out += " " + format_g17(v);
                }
                out += " " + std::to_string(m.labels[i]) + "\n";
            }
            break;
        }
        case ModelKind::NB: {
            const NbModel& m = std::get<NbModel>(model.impl);
            append_doubles(out, "log_prior", m.log_prior.data(), kNumClasses);
            for (int c = 0; c < kNumClasses; ++c) {
                const std::size_t cc = static_cast<std::size_t>(c);
                append_doubles(out, ("mean" + std::to_string(c + 1)).c_str(),
                               m.mean[cc].data(), kNumFeatures);
                append_doubles(out, ("var" + std::to_string(c + 1)).c_str(), m.var[cc].data(),
                               kNumFeatures);
            }
            break;
        }
        case ModelKind::TREE: {
            const TreeModel& m = std::get<TreeModel>(model.impl);
            out += "max_depth " + std::to_string(m.max_depth) + "\n";
            out += "min_leaf " + std::to_string(m.min_leaf) + "\n";
            out += "nodes " + std::to_string(m.nodes.size()) + "\n";
            for (const TreeNode& node : m.nodes) {
                out += "n " + std::to_string(node.feature) + " " + format_g17(node.threshold) +
                       " " + std::to_string(node.left) + " " + std::to_string(node.right);
                for (double p : node.prob) {
                    out += " " + format_g17(p);
                }
                out += "\n";
            }
            break;
        }
        case ModelKind::MLP: {
            const MlpModel& m = std::get<MlpModel>(model.impl);
            out += "hidden " + std::to_string(m.hidden) + "\n";
            append_doubles(out, "w1", m.w1.data(), m.w1.size());
            append_doubles(out, "b1", m.b1.data(), m.b1.size());
            append_doubles(out, "w2", m.w2.data(), m.w2.size());
            append_doubles(out, "b2", m.b2.data(), m.b2.size());
            break;
        }
    }
    out += "end\n";
    return out;
}

Model model_from_text(const std::string& text) {
    Reader reader{split_lines(text), 0};

    const std::vector<std::string> head = reader.next_tokens("model");
    if (head.size() != 3 || head[2] != "v1") {
        throw LoadError("model file: bad version line");
    }
    const ModelKind kind = model_kind_from_name(head[1]);

    Model model;
    model.scaler = read_scaler_section(reader);

    switch (kind) {
        case ModelKind::KNN: {
            KnnModel m;
            m.k = static_cast<int>(reader.read_int("k"));
            const std::int64_t n = reader.read_int("points");
            if (n < 0) throw LoadError("model file: negative point count");
            m.points.resize(static_cast<std::size_t>(n));
            m.labels.resize(static_cast<std::size_t>(n));
            for (std::int64_t i = 0; i < n; ++i) {
                const std::vector<std::string> tokens = reader.next_tokens("p");
                if (tokens.size() != 2 + kNumFeatures) {
                    throw LoadError("model file: malformed knn point row");
                }
                for (int f = 0; f < kNumFeatures; ++f) {
                    m.points[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)] =
                        parse_double(tokens[static_cast<std::size_t>(1 + f)], "knn point");
                }
                const std::int64_t label =
                    parse_int(tokens[1 + kNumFeatures], "knn label");
                if (label < 1 || label > kNumClasses) {
                    throw LoadError("model file: knn label out of range");
                }
                m.labels[static_cast<std::size_t>(i)] = static_cast<int>(label);
            }
            if (m.k <= 0 || static_cast<std::size_t>(m.k) > m.points.size()) {
                throw LoadError("model file: invalid k");
            }
            model.impl = std::move(m);
            break;
        }
        case ModelKind::NB: {
            NbModel m;
            reader.read_doubles("log_prior", m.log_prior.data(), kNumClasses);
            for (int c = 0; c < kNumClasses; ++c) {
                const std::size_t cc = static_cast<std::size_t>(c);
                reader.read_doubles("mean" + std::to_string(c + 1), m.mean[cc].data(),
                                    kNumFeatures);
                reader.read_doubles("var" + std::to_string(c + 1), m.var[cc].data(),
                                    kNumFeatures);
            }
            model.impl = m;
            break;
        }
        case ModelKind::TREE: {
            TreeModel m;
            m.max_depth = static_cast<int>(reader.read_int("max_depth"));
            m.min_leaf = static_cast<int>(reader.read_int("min_leaf"));
            const std::int64_t n = reader.read_int("nodes");
            if (n <= 0) throw LoadError("model file: empty tree");
            m.nodes.resize(static_cast<std::size_t>(n));
            for (std::int64_t i = 0; i < n; ++i) {
                const std::vector<std::string> tokens = reader.next_tokens("n");
                if (tokens.size() != 5 + kNumClasses) {
                    throw LoadError("model file: malformed tree node row");
                }
                TreeNode& node = m.nodes[static_cast<std::size_t>(i)];
                node.feature = static_cast<int>(parse_int(tokens[1], "tree node"));
                node.threshold = parse_double(tokens[2], "tree node");
                node.left = static_cast<int>(parse_int(tokens[3], "tree node"));
                node.right = static_cast<int>(parse_int(tokens[4], "tree node"));
                for (int c = 0; c < kNumClasses; ++c) {
                    node.prob[static_cast<std::size_t>(c)] =
                        parse_double(tokens[static_cast<std::size_t>(5 + c)], "tree node");
                }
                if (node.feature >= kNumFeatures ||
                    (node.feature >= 0 &&
                     (node.left < 0 || node.left >= n || node.right < 0 || node.right >= n))) {
                    throw LoadError("model file: tree node references out of range");
                }
            }
            model.impl = std::move(m);
            break;
        }
        case ModelKind::MLP: {
            MlpModel m;
            const std::int64_t hidden = reader.read_int("hidden");
            if (hidden < 1 || hidden > 100000) {
                throw LoadError("model file: invalid hidden size");
            }
            m.hidden = static_cast<int>(hidden);
            m.w1.resize(static_cast<std::size_t>(hidden) * kNumFeatures);
            m.b1.resize(static_cast<std::size_t>(hidden));
            m.w2.resize(static_cast<std::size_t>(kNumClasses) * static_cast<std::size_t>(hidden));
            m.b2.resize(kNumClasses);
            reader.read_doubles("w1", m.w1.data(), m.w1.size());
            reader.read_doubles("b1", m.b1.data(), m.b1.size());
            reader.read_doubles("w2", m.w2.data(), m.w2.size());
            reader.read_doubles("b2", m.b2.data(), m.b2.size());
            model.impl = std::move(m);
            break;
        }
    }

    if (strip(reader.next_line()) != "end") {
        throw LoadError("model file: missing end marker");
    }
    return model;
}

void save_model(const Model& model, const std::string& path) {
    atomic_write_file(path, model_to_text(model));
}

Model load_model(const std::string& path) {
    return model_from_text(read_file(path));
}

}  // namespace wavesel
