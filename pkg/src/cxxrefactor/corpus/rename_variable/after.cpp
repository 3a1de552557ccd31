class Stats {
public:
    int sumOfSquares(int a, int b) {
        int result = a * a;
        result = result + b * b;
        return result;
    }
};
