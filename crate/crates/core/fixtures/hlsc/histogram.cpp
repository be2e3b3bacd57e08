#include <ap_int.h>

void top_module(const ap_uint<4> samples[32], unsigned int hist[16]) {
    for (int i = 0; i < 16; i++) {
        hist[i] = 0;
    }
    for (int i = 0; i < 32; i++) {
#pragma HLS PIPELINE II=2
        ap_uint<4> bin = samples[i];
        hist[bin] = hist[bin] + 1;
    }
}
