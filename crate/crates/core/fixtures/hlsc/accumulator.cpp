#include <ap_int.h>

void top_module(const int data[64], int n, long long& total, int& max_val) {
#pragma HLS INTERFACE m_axi port=data depth=64
    long long acc = 0;
    int best = data[0];
    for (int i = 0; i < n && i < 64; ++i) {
#pragma HLS PIPELINE
        acc += data[i];
        if (data[i] > best) best = data[i];
    }
    total = acc;
    max_val = best;
}
