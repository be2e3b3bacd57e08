#include <ap_fixed.h>

// 8-tap FIR filter with a shift register
void top_module(ap_fixed<16, 8> x, ap_fixed<16, 8>& y) {
#pragma HLS PIPELINE II=1
    static ap_fixed<16, 8> shift_reg[8];
#pragma HLS ARRAY_PARTITION variable=shift_reg complete
    const ap_fixed<16, 8> coeff[8] = {0.125, 0.25, 0.5, 1.0, 1.0, 0.5, 0.25, 0.125};
    ap_fixed<32, 16> acc = 0;
    for (int i = 7; i > 0; i--) {
        shift_reg[i] = shift_reg[i - 1];
        acc += shift_reg[i] * coeff[i];
    }
    shift_reg[0] = x;
    acc += x * coeff[0];
    y = acc;
}
