#pragma once

#include "malc/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>

namespace malc {

enum class DataFormat { csv, svmlight };

DataFormat parse_data_format(const std::string& name);

struct LoadOptions {
    DataFormat format = DataFormat::csv;
    // CSV only: header name or 0-based column index; empty means the last column.
    std::string label_column;
    // svmlight only: pad the inferred width up to at least this many features.
    Index min_dims = 0;
};

/// Reads a labelled dataset. Labels in the file are 1-based; K is the max label seen.
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts = {});

/// One integer label per line. Range is checked against K later.
BlackboxPredictions load_blackbox_predictions(const std::filesystem::path& path, Index n);

void save_blackbox_predictions(const BlackboxPredictions& bb, const std::filesystem::path& path);
void save_dataset_csv(const Dataset& ds, const std::filesystem::path& path);
void save_dataset_svmlight(const Dataset& ds, const std::filesystem::path& path);

/// Raises ds.num_classes to cover every black-box label and validates both sides.
void reconcile_num_classes(Dataset& ds, const BlackboxPredictions& bb);

ClassPartition partition_indices(const Labels& labels, const BlackboxPredictions& bb, int num_classes);

struct Split {
    Dataset train;
    BlackboxPredictions train_bb;
    Dataset validation;
    BlackboxPredictions validation_bb;
};

/// `fraction` is the validation share: round(fraction * n) rows go to validation.
Split holdout_split(const Dataset& ds, const BlackboxPredictions& bb, double fraction, std::uint64_t seed,
                    bool stratified = false);

Dataset take_rows(const Dataset& ds, const std::vector<Index>& rows);
BlackboxPredictions take_rows(const BlackboxPredictions& bb, const std::vector<Index>& rows);

std::pair<Dataset, ScalingParams> minmax_scale(const Dataset& ds);
Dataset apply_scale(const Dataset& ds, const ScalingParams& params);

/// Appends a constant-1 column named "bias" and records it as the bias column.
Dataset append_bias(const Dataset& ds);

/// 64-bit FNV-1a of the file contents, hex encoded.
std::string file_hash(const std::filesystem::path& path);

}  // namespace malc
