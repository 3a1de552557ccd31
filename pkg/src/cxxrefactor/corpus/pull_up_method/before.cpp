class Animal {
public:
    int age;
};
class Dog : public Animal {
public:
    int breathe() {
        int rate = 12;
        return rate * 2;
    }
};
