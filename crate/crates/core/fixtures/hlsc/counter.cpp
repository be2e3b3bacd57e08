#include <ap_int.h>

// Free-running 4-bit counter with synchronous reset
void top_module(bool reset, ap_uint<4>& q) {
#pragma HLS PIPELINE II=1
    static ap_uint<4> count = 0;
    if (reset) {
        count = 0;
    } else {
        count = count + 1;
    }
    q = count;
}
