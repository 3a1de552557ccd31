class Tally {
public:
    int count;
    void increment() {
        count = count + 1;
    }
    int get() {
        return count;
    }
};
