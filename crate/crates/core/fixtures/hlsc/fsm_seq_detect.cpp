#include <ap_int.h>

// Detects the serial pattern 101 (overlapping)
void top_module(bool in, bool reset, bool& found) {
#pragma HLS PIPELINE II=1
    static ap_uint<2> state = 0;
    if (reset) {
        state = 0;
        found = false;
        return;
    }
    switch (state) {
    case 0:
        state = in ? 1 : 0;
        found = false;
        break;
    case 1:
        state = in ? 1 : 2;
        found = false;
        break;
    case 2:
        found = in;
        state = in ? 1 : 0;
        break;
    default:
        state = 0;
        found = false;
    }
}
