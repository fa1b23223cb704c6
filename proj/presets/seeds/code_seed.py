def sort_array(array):
    # Copy so the input stays untouched.
    result = list(array)
    if len(result) < 2:
        return result
    descending = (result[0] + result[-1]) % 2 == 0
    # Insertion sort.
    for i in range(1, len(result)):
        key = result[i]
        j = i - 1
        while j >= 0 and (result[j] < key if descending else result[j] > key):
            result[j + 1] = result[j]
            j -= 1
        result[j + 1] = key
    return result
