// Signed saturating addition on 8-bit values
void top_module(signed char a, signed char b, signed char& y) {
    int s = a + b;
    if (s > 127) {
        y = 127;
    } else if (s < -128) {
        y = -128;
    } else {
        y = s;
    }
}
