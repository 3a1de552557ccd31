class Counter {
public:
    int value;
    int next() {
        value = value + 1;
        return value;
    }
};
