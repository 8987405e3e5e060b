#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace cxrsev {

struct ConfusionMatrix {
    int k = 0;
    std::vector<std::int64_t> counts; // row-major, rows = true class, cols = predicted
    std::vector<std::string> class_names;

    std::int64_t at(int t, int p) const {
        return counts[static_cast<std::size_t>(t) * static_cast<std::size_t>(k) +
                      static_cast<std::size_t>(p)];
    }
    std::int64_t& at(int t, int p) {
        return counts[static_cast<std::size_t>(t) * static_cast<std::size_t>(k) +
                      static_cast<std::size_t>(p)];
    }
    std::int64_t total() const;
    std::int64_t support(int c) const; // row sum
};

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred,
                                 int k);

// trace / total.
double accuracy(const ConfusionMatrix& cm);

// One-vs-rest metrics for one class. Zero denominators yield 0.0 and set the
// matching degenerate flag instead of failing.
struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;
    bool degenerate_precision = false;
    bool degenerate_recall = false;
    bool degenerate_f1 = false;
};

ClassMetrics class_metrics(const ConfusionMatrix& cm, int c);

double precision_class(const ConfusionMatrix& cm, int c);
double recall_class(const ConfusionMatrix& cm, int c);
double f1_class(const ConfusionMatrix& cm, int c);

// Per-class rows plus an unweighted average row and the overall accuracy.
struct MacroReport {
    std::vector<std::string> class_names;
    std::vector<ClassMetrics> per_class;
    double avg_precision = 0.0;
    double avg_recall = 0.0;
    double avg_f1 = 0.0;
    double avg_support = 0.0;
    double overall_accuracy = 0.0;
};

MacroReport macro_report(const ConfusionMatrix& cm);

std::string render_report_text(const MacroReport& report);
std::string render_report_json(const MacroReport& report);
std::string confusion_to_csv(const ConfusionMatrix& cm);

} // namespace cxrsev
