#include "malc/data.hpp"

#include "malc/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

namespace malc {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

int parse_label(std::string_view field, std::size_t line) {
    auto v = parse_int(field);
    if (!v) throw ParseError("non-integer label '" + std::string(trim(field)) + "'", line);
    if (*v < 1) throw ParseError("label " + std::to_string(*v) + " outside positive integers (labels start at 1)", line);
    if (*v > 1'000'000) throw ParseError("label " + std::to_string(*v) + " unreasonably large", line);
    return static_cast<int>(*v);
}

std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

Dataset finish(std::vector<std::vector<double>> rows, std::vector<int> labels, std::vector<std::string> names,
               const std::filesystem::path& path) {
    if (rows.empty()) throw ParseError("empty dataset " + path.string());
    const Index n = static_cast<Index>(rows.size());
    const Index d = static_cast<Index>(names.size());
    if (d < 1) throw ParseError("dataset has no feature columns: " + path.string());
    Dataset ds;
    ds.features.resize(n, d);
    ds.labels.resize(n);
    int k = 0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < d; ++j) ds.features(i, j) = rows[i][j];
        ds.labels(i) = labels[i] - 1;
        k = std::max(k, labels[i]);
    }
    ds.feature_names = std::move(names);
    ds.num_classes = std::max(k, 2);
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& opts) {
    auto in = open_input(path);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        for (auto f : split(line, ',')) header.push_back(unquote(f));
        break;
    }
    if (header.empty()) throw ParseError("empty file " + path.string());

    std::size_t label_col = header.size() - 1;
    if (!opts.label_column.empty()) {
        auto it = std::find(header.begin(), header.end(), opts.label_column);
        if (it != header.end()) {
            label_col = static_cast<std::size_t>(it - header.begin());
        } else if (auto idx = parse_int(opts.label_column); idx && *idx >= 0 &&
                                                            static_cast<std::size_t>(*idx) < header.size()) {
            label_col = static_cast<std::size_t>(*idx);
        } else {
            throw ParseError("label column '" + opts.label_column + "' not found in header", 1);
        }
    }

    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_col) names.push_back(header[c]);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != header.size())
            throw ParseError("malformed row: expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        std::vector<double> row;
        row.reserve(names.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c == label_col) {
                labels.push_back(parse_label(fields[c], lineno));
                continue;
            }
            auto v = parse_double(fields[c]);
            if (!v || !std::isfinite(*v))
                throw ParseError("non-numeric feature '" + std::string(trim(fields[c])) + "' in column '" +
                                     header[c] + "'",
                                 lineno);
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    }
    return finish(std::move(rows), std::move(labels), std::move(names), path);
}

Dataset load_svmlight(const std::filesystem::path& path, const LoadOptions& opts) {
    auto in = open_input(path);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::vector<std::pair<Index, double>>> sparse;
    std::vector<int> labels;
    Index d = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = line;
        if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        std::istringstream tokens{std::string(body)};
        std::string tok;
        tokens >> tok;
        labels.push_back(parse_label(tok, lineno));
        std::vector<std::pair<Index, double>> entries;
        Index last = 0;
        while (tokens >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos) throw ParseError("malformed feature token '" + tok + "'", lineno);
            auto idx = parse_int(std::string_view(tok).substr(0, colon));
            auto val = parse_double(std::string_view(tok).substr(colon + 1));
            if (!idx || *idx < 1) throw ParseError("bad feature index in '" + tok + "' (indices are 1-based)", lineno);
            if (!val || !std::isfinite(*val)) throw ParseError("non-numeric feature value in '" + tok + "'", lineno);
            if (*idx <= last) throw ParseError("feature indices must be strictly increasing", lineno);
            last = static_cast<Index>(*idx);
            entries.emplace_back(last - 1, *val);
            d = std::max(d, last);
        }
        sparse.push_back(std::move(entries));
    }
    if (sparse.empty()) throw ParseError("empty file " + path.string());
    d = std::max({d, opts.min_dims, Index{1}});
    std::vector<std::vector<double>> rows;
    rows.reserve(sparse.size());
    for (const auto& entries : sparse) {
        std::vector<double> row(static_cast<std::size_t>(d), 0.0);
        for (auto [j, v] : entries) row[static_cast<std::size_t>(j)] = v;
        rows.push_back(std::move(row));
    }
    std::vector<std::string> names;
    for (Index j = 0; j < d; ++j) names.push_back("f" + std::to_string(j + 1));
    return finish(std::move(rows), std::move(labels), std::move(names), path);
}

}  // namespace

DataFormat parse_data_format(const std::string& name) {
    if (name == "csv") return DataFormat::csv;
    if (name == "svmlight" || name == "libsvm") return DataFormat::svmlight;
    throw Error("unknown data format '" + name + "' (expected csv or svmlight)");
}

Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts) {
    return opts.format == DataFormat::csv ? load_csv(path, opts) : load_svmlight(path, opts);
}

BlackboxPredictions load_blackbox_predictions(const std::filesystem::path& path, Index n) {
    auto in = open_input(path);
    std::vector<int> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        labels.push_back(parse_label(line, lineno));
    }
    if (static_cast<Index>(labels.size()) != n)
        throw ParseError("black-box prediction count " + std::to_string(labels.size()) + " does not match dataset rows " +
                         std::to_string(n) + " in " + path.string());
    BlackboxPredictions bb;
    bb.preds.resize(n);
    for (Index i = 0; i < n; ++i) bb.preds(i) = labels[static_cast<std::size_t>(i)] - 1;
    return bb;
}

void save_blackbox_predictions(const BlackboxPredictions& bb, const std::filesystem::path& path) {
    auto out = open_output(path);
    for (Index i = 0; i < bb.size(); ++i) out << bb.preds(i) + 1 << '\n';
}

void save_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
    auto out = open_output(path);
    for (const auto& name : ds.feature_names) out << name << ',';
    out << "label\n";
    for (Index i = 0; i < ds.rows(); ++i) {
        for (Index j = 0; j < ds.dims(); ++j) out << format_double(ds.features(i, j)) << ',';
        out << ds.labels(i) + 1 << '\n';
    }
}

void save_dataset_svmlight(const Dataset& ds, const std::filesystem::path& path) {
    auto out = open_output(path);
    for (Index i = 0; i < ds.rows(); ++i) {
        out << ds.labels(i) + 1;
        for (Index j = 0; j < ds.dims(); ++j)
            if (ds.features(i, j) != 0.0) out << ' ' << j + 1 << ':' << format_double(ds.features(i, j));
        out << '\n';
    }
}

void reconcile_num_classes(Dataset& ds, const BlackboxPredictions& bb) {
    if (bb.size() != ds.rows())
        throw ShapeError("black-box predictions have " + std::to_string(bb.size()) + " rows, dataset has " +
                         std::to_string(ds.rows()));
    if (bb.size() > 0) {
        if (bb.preds.minCoeff() < 0) throw Error("black-box prediction outside positive labels");
        ds.num_classes = std::max(ds.num_classes, bb.preds.maxCoeff() + 1);
    }
}

ClassPartition partition_indices(const Labels& labels, const BlackboxPredictions& bb, int num_classes) {
    if (labels.size() != bb.size())
        throw ShapeError("labels (" + std::to_string(labels.size()) + ") and black-box predictions (" +
                         std::to_string(bb.size()) + ") differ in length");
    ClassPartition part;
    part.pos.resize(static_cast<std::size_t>(num_classes));
    part.neg.resize(static_cast<std::size_t>(num_classes));
    for (Index i = 0; i < labels.size(); ++i) {
        const int k = labels(i);
        if (k < 0 || k >= num_classes) throw Error("label " + std::to_string(k + 1) + " outside {1.." +
                                                   std::to_string(num_classes) + "}");
        if (bb.preds(i) < 0 || bb.preds(i) >= num_classes)
            throw Error("black-box prediction " + std::to_string(bb.preds(i) + 1) + " outside {1.." +
                        std::to_string(num_classes) + "}");
        (bb.preds(i) == k ? part.pos : part.neg)[static_cast<std::size_t>(k)].push_back(i);
    }
    return part;
}

Dataset take_rows(const Dataset& ds, const std::vector<Index>& rows) {
    Dataset out;
    out.features = ds.features(rows, Eigen::all);
    out.labels = ds.labels(rows);
    out.feature_names = ds.feature_names;
    out.num_classes = ds.num_classes;
    out.bias_column = ds.bias_column;
    return out;
}

BlackboxPredictions take_rows(const BlackboxPredictions& bb, const std::vector<Index>& rows) {
    return {bb.preds(rows)};
}

Split holdout_split(const Dataset& ds, const BlackboxPredictions& bb, double fraction, std::uint64_t seed,
                    bool stratified) {
    const Index n = ds.rows();
    if (bb.size() != n) throw ShapeError("black-box predictions not aligned with dataset");
    const auto n_val = static_cast<Index>(std::llround(fraction * static_cast<double>(n)));
    if (!(fraction > 0.0 && fraction < 1.0) || fraction * n < 1.0 || (1.0 - fraction) * n < 1.0 || n_val < 1 ||
        n_val >= n)
        throw Error("degenerate holdout fraction " + format_double(fraction) + " for " + std::to_string(n) + " rows");

    std::mt19937_64 rng(seed);
    std::vector<Index> val;
    if (stratified) {
        std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(ds.num_classes));
        for (Index i = 0; i < n; ++i) by_class[static_cast<std::size_t>(ds.labels(i))].push_back(i);
        for (auto& rows : by_class) {
            std::shuffle(rows.begin(), rows.end(), rng);
            auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size())));
            val.insert(val.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
        }
        if (val.empty() || static_cast<Index>(val.size()) >= n)
            throw Error("stratified holdout leaves an empty side");
    } else {
        std::vector<Index> order(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::shuffle(order.begin(), order.end(), rng);
        val.assign(order.begin(), order.begin() + n_val);
    }
    std::sort(val.begin(), val.end());
    std::vector<Index> train;
    std::vector<char> in_val(static_cast<std::size_t>(n), 0);
    for (Index i : val) in_val[static_cast<std::size_t>(i)] = 1;
    for (Index i = 0; i < n; ++i)
        if (!in_val[static_cast<std::size_t>(i)]) train.push_back(i);

    return {take_rows(ds, train), take_rows(bb, train), take_rows(ds, val), take_rows(bb, val)};
}

std::pair<Dataset, ScalingParams> minmax_scale(const Dataset& ds) {
    ScalingParams params{ds.features.colwise().minCoeff().transpose(), ds.features.colwise().maxCoeff().transpose()};
    if (ds.bias_column) {
        // Leave the intercept column at 1.
        params.min(*ds.bias_column) = 0.0;
        params.max(*ds.bias_column) = 1.0;
    }
    return {apply_scale(ds, params), params};
}

Dataset apply_scale(const Dataset& ds, const ScalingParams& params) {
    if (params.min.size() != ds.dims() || params.max.size() != ds.dims())
        throw ShapeError("scaling parameters have " + std::to_string(params.min.size()) + " features, data has " +
                         std::to_string(ds.dims()));
    Dataset out = ds;
    for (Index j = 0; j < ds.dims(); ++j) {
        const double range = params.max(j) - params.min(j);
        if (range > 0.0)
            out.features.col(j) = (ds.features.col(j).array() - params.min(j)) / range;
        else
            out.features.col(j).setZero();
    }
    return out;
}

Dataset append_bias(const Dataset& ds) {
    Dataset out = ds;
    out.features.conservativeResize(Eigen::NoChange, ds.dims() + 1);
    out.features.col(ds.dims()).setOnes();
    out.feature_names.push_back("bias");
    out.bias_column = ds.dims();
    return out;
}

std::string file_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace malc
