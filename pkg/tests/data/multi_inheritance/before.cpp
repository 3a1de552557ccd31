class A {
public:
    int a;
};
class B {
public:
    int b;
};
class D : A, B {
public:
    int x;
    double y;
    int z;
};
