#include <ap_int.h>

// Debouncer: output follows input after it is stable for 4 samples
void top_module(bool raw, bool& clean) {
#pragma HLS PIPELINE II=1
    static ap_uint<3> stable = 0;
    static bool last = false;
    static bool state = false;
    if (raw == last) {
        if (stable < 4) {
            stable++;
        } else {
            state = raw;
        }
    } else {
        stable = 0;
    }
    last = raw;
    clean = state;
}
